#pragma once

#include <span>
#include <vector>

#include "pbn/core.hpp"
#include "pbn/risk.hpp"

namespace pbn {

/// One point mass p(x, y, s).
struct Atom {
  FeatureVector x;
  Label y = Label::positive;
  Observation s = Observation::observed;
  double probability = 0.0;
};

/// Finite-support joint distribution over (x, y, s). Expectations over it
/// are exact sums, so risk identities can be checked to rounding error.
class DiscreteJoint {
 public:
  /// Requires p >= 0, sum p = 1 within 1e-12, a common dimension, and no
  /// positive mass on (y=+1, s=-1).
  explicit DiscreteJoint(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t dim() const { return atoms_.front().x.size(); }

  /// pi = p(y=+1)
  double class_prior() const;
  /// rho = p(y=-1, s=+1)
  double biased_negative_mass() const;
  /// p(s=+1) = pi + rho
  double observed_mass() const;
  /// p(x), summed over every atom located at x (0 if x is not in the support).
  double marginal(std::span<const double> x) const;

 private:
  std::vector<Atom> atoms_;
};

/// sum_atoms p(x, y) l(y g(x)) = pi E_P[l(g)] + (1 - pi) E_N[l(-g)].
double exact_pn_risk(const DiscreteJoint& joint, const LinearClassifier& clf);

/// sigma(x) = p(x, s=+1) / p(x). Throws if p(x) = 0.
double exact_sigma(const DiscreteJoint& joint, std::span<const double> x);

/// r(x) = p(x, y=+1) / p(x). Throws if p(x) = 0.
double exact_confidence(const DiscreteJoint& joint, std::span<const double> x);

/// pi E_P[l(g)] + rho E_bN[l(-g)] + (pi + rho) E_{s=+1}[R^-((1 - sigma)/sigma g)]
/// with exact, unclipped sigma. ScaleForm::loss is the weighted-loss reading
/// under which this equals exact_pn_risk. Throws if an observed atom has
/// sigma = 0 (cannot happen for a valid joint) or if some x carries only
/// unobserved mass.
double exact_pbn_risk(const DiscreteJoint& joint, const LinearClassifier& clf,
                      ScaleForm form = ScaleForm::loss);

/// pi E_P[l(g) + R^-((1 - r)/r g)] with exact r. Throws if a negative atom
/// sits at an x without positive mass.
double exact_pconf_risk(const DiscreteJoint& joint, const LinearClassifier& clf,
                        ScaleForm form = ScaleForm::loss);

/// |exact_pn_risk - exact_pbn_risk| with the weighted-loss form.
double verify_decomposition(const DiscreteJoint& joint, const LinearClassifier& clf);

/// |exact_pn_risk - exact_pconf_risk| with the weighted-loss form.
double verify_pconf(const DiscreteJoint& joint, const LinearClassifier& clf);

}  // namespace pbn
