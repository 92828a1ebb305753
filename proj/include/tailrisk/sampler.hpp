#pragma once

#include "tailrisk/regime.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {

// Draws from a RegimeModel: a regime by weight, then that component by
// inverse CDF. Two uniforms per draw.
class MixtureSampler {
 public:
  explicit MixtureSampler(const RegimeModel& model);

  struct Draw {
    double value;
    Regime regime;
  };

  Draw draw(Rng& rng) const;

 private:
  RegimeModel model_;
  double cut_political_;
  double cut_performance_;
  TruncatedPowerLaw political_;
  TruncatedGaussian performance_;
};

}  // namespace tailrisk
