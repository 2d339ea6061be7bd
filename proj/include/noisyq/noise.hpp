#pragma once

#include <cmath>
#include <stdexcept>

namespace noisyq {

// Binary symmetric channel with crossover probability p.
// p = 1/2 is rejected: every quantity downstream (capacity, KL divergence,
// stopping barriers) degenerates there. p = 0 is the documented noiseless case.
class NoiseModel {
  public:
    explicit NoiseModel(double p) : p_(p) {
        if (!(p >= 0.0) || !(p < 0.5)) {
            throw std::invalid_argument("NoiseModel: p must satisfy 0 <= p < 1/2");
        }
    }

    double p() const { return p_; }
    bool noiseless() const { return p_ == 0.0; }

    // log((1-p)/p), the per-observation log-likelihood step. Infinite at p = 0.
    double log_likelihood_ratio() const { return std::log((1.0 - p_) / p_); }

  private:
    double p_;
};

}  // namespace noisyq
