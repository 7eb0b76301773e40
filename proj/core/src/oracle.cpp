#include "pbn/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pbn/losses.hpp"

namespace pbn {

namespace {

bool same_point(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) return false;
  }
  return true;
}

std::string describe(std::span<const double> x) {
  std::ostringstream out;
  out << '[';
  for (std::size_t j = 0; j < x.size(); ++j) out << (j ? ", " : "") << x[j];
  out << ']';
  return out.str();
}

struct PointMass {
  double total = 0.0;
  double observed = 0.0;
  double positive = 0.0;
};

PointMass mass_at(const DiscreteJoint& joint, std::span<const double> x) {
  PointMass m;
  for (const auto& a : joint.atoms()) {
    if (!same_point(a.x, x)) continue;
    m.total += a.probability;
    if (a.s == Observation::observed) m.observed += a.probability;
    if (a.y == Label::positive) m.positive += a.probability;
  }
  return m;
}

// l(dir * c * g) or c * l(dir * g).
double scaled_loss(double direction, double c, double g, ScaleForm form) {
  return form == ScaleForm::margin ? logistic_loss(direction * c * g)
                                   : c * logistic_loss(direction * g);
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("joint needs at least one atom");
  const std::size_t d = atoms_.front().x.size();
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.x.size() != d) throw std::invalid_argument("joint atoms differ in dimension");
    if (!(a.probability >= 0.0)) throw std::invalid_argument("joint probabilities must be >= 0");
    if (a.y == Label::positive && a.s == Observation::unobserved && a.probability > 0.0) {
      throw std::invalid_argument("joint puts mass on an unobserved positive at " + describe(a.x));
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("joint probabilities must sum to 1");
}

double DiscreteJoint::class_prior() const {
  double pi = 0.0;
  for (const auto& a : atoms_) {
    if (a.y == Label::positive) pi += a.probability;
  }
  return pi;
}

double DiscreteJoint::biased_negative_mass() const {
  double rho = 0.0;
  for (const auto& a : atoms_) {
    if (a.y == Label::negative && a.s == Observation::observed) rho += a.probability;
  }
  return rho;
}

double DiscreteJoint::observed_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) {
    if (a.s == Observation::observed) m += a.probability;
  }
  return m;
}

double DiscreteJoint::marginal(std::span<const double> x) const { return mass_at(*this, x).total; }

double exact_pn_risk(const DiscreteJoint& joint, const LinearClassifier& clf) {
  double risk = 0.0;
  for (const auto& a : joint.atoms()) {
    risk += a.probability * logistic_loss(sign_of(a.y) * margin(clf, a.x));
  }
  return risk;
}

double exact_sigma(const DiscreteJoint& joint, std::span<const double> x) {
  const PointMass m = mass_at(joint, x);
  if (!(m.total > 0.0)) throw std::invalid_argument("exact_sigma: p(x) = 0 at " + describe(x));
  return m.observed / m.total;
}

double exact_confidence(const DiscreteJoint& joint, std::span<const double> x) {
  const PointMass m = mass_at(joint, x);
  if (!(m.total > 0.0)) throw std::invalid_argument("exact_confidence: p(x) = 0 at " + describe(x));
  return m.positive / m.total;
}

double exact_pbn_risk(const DiscreteJoint& joint, const LinearClassifier& clf, ScaleForm form) {
  // Each expectation weighted by its mass is a plain sum over atoms:
  //   pi E_P[.]        = sum over (y=+1) atoms of p * .
  //   rho E_bN[.]      = sum over (y=-1, s=+1) atoms of p * .
  //   (pi+rho) E_s[.]  = sum over (s=+1) atoms of p * .
  double positive_term = 0.0;
  double biased_term = 0.0;
  double observed_term = 0.0;
  for (const auto& a : joint.atoms()) {
    if (a.probability == 0.0) continue;
    const double g = margin(clf, a.x);
    if (a.y == Label::positive) positive_term += a.probability * logistic_loss(g);
    if (a.s == Observation::observed) {
      if (a.y == Label::negative) biased_term += a.probability * logistic_loss(-g);
      const double sigma = exact_sigma(joint, a.x);
      if (!(sigma > 0.0)) throw std::invalid_argument("exact_pbn_risk: sigma = 0 at " + describe(a.x));
      observed_term += a.probability * scaled_loss(-1.0, (1.0 - sigma) / sigma, g, form);
    } else if (!(mass_at(joint, a.x).observed > 0.0)) {
      throw std::invalid_argument("exact_pbn_risk: sigma = 0 at " + describe(a.x) +
                                  " (unobserved mass with no observed mass)");
    }
  }
  return positive_term + biased_term + observed_term;
}

double exact_pconf_risk(const DiscreteJoint& joint, const LinearClassifier& clf, ScaleForm form) {
  double risk = 0.0;
  for (const auto& a : joint.atoms()) {
    if (a.probability == 0.0) continue;
    if (a.y == Label::negative) {
      if (!(mass_at(joint, a.x).positive > 0.0)) {
        throw std::invalid_argument("exact_pconf_risk: r = 0 at " + describe(a.x));
      }
      continue;
    }
    const double g = margin(clf, a.x);
    const double r = exact_confidence(joint, a.x);
    risk += a.probability * (logistic_loss(g) + scaled_loss(-1.0, (1.0 - r) / r, g, form));
  }
  return risk;
}

double verify_decomposition(const DiscreteJoint& joint, const LinearClassifier& clf) {
  return std::abs(exact_pn_risk(joint, clf) - exact_pbn_risk(joint, clf, ScaleForm::loss));
}

double verify_pconf(const DiscreteJoint& joint, const LinearClassifier& clf) {
  return std::abs(exact_pn_risk(joint, clf) - exact_pconf_risk(joint, clf, ScaleForm::loss));
}

}  // namespace pbn
