#include "tailrisk/sampler.hpp"

namespace tailrisk {

MixtureSampler::MixtureSampler(const RegimeModel& model)
    : model_(model),
      cut_political_(model.weights[0]),
      cut_performance_(model.weights[0] + model.weights[1]),
      political_(model.political_law()),
      performance_(model.performance_law()) {
  validate(model_);
}

MixtureSampler::Draw MixtureSampler::draw(Rng& rng) const {
  const double pick = rng.uniform();
  const double u = rng.uniform_open();
  if (pick < cut_political_) return {political_.quantile(u), Regime::Political};
  if (pick < cut_performance_ || !model_.present(Regime::BlackSwan)) {
    return {performance_.quantile(u), Regime::Performance};
  }
  return {pareto_from_uniform(model_.black_swan_law(), u), Regime::BlackSwan};
}

}  // namespace tailrisk
