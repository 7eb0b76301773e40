#pragma once

namespace pbn {

/// log(1 + e^{-z}), evaluated as max(-z, 0) + log1p(e^{-|z|}).
/// Throws std::invalid_argument for non-finite z.
double logistic_loss(double z);

/// d/dz logistic_loss = -1 / (1 + e^{z}), in (-1, 0).
double logistic_loss_grad(double z);

/// (1 - sign(z)) / 2 with sign(0) = 0, so a zero margin costs 0.5.
double zero_one_loss(double z);

}  // namespace pbn
