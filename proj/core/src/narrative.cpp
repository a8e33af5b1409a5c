#include <string>

#include "vareff/effect_size.hpp"
#include "vareff/report.hpp"

namespace vareff {

namespace {

const char* band_adjective(EffectBand band) {
  switch (band) {
    case EffectBand::trivial: return "only a trivial";
    case EffectBand::small: return "a small";
    case EffectBand::medium: return "a medium";
    case EffectBand::large: return "a large";
  }
  return "a";
}

}  // namespace

std::string narrative_sentence(EffectBand band, bool monotone, double slope,
                               bool slope_significant, bool negative_r2) {
  if (negative_r2)
    return "The model fits worse than the mean predictor (negative R-squared), so effect size "
           "and direction are not interpretable for this variable.";

  const std::string opening =
      std::string("The independent variable exerts ") + band_adjective(band);

  if (!monotone) return opening + " effect on the dependent variable, which is not monotonic.";

  if (slope_significant && slope != 0.0) {
    const char* direction = slope < 0.0 ? "negative" : "positive";
    return opening + " monotonic effect on the dependent variable, which is " + direction +
           " and statistically significant.";
  }
  return opening +
         " monotonic effect on the dependent variable whose direction is not statistically "
         "resolved.";
}

}  // namespace vareff
