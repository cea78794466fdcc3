#include "mrlbm/prediction.hpp"

#include <stdexcept>

namespace mrlbm {

PredictionSpec PredictionSpec::centered(int gamma) {
  PredictionSpec spec;
  spec.gamma = gamma;
  switch (gamma) {
    case 1:
      spec.coeff = {-1.0 / 8.0, 0.0, 0.0};
      break;
    case 2:
      spec.coeff = {-22.0 / 128.0, 3.0 / 128.0, 0.0};
      break;
    case 3:
      // Signs alternate: these are the unique coefficients exact on cell
      // averages of polynomials up to degree six.
      spec.coeff = {-201.0 / 1024.0, 11.0 / 256.0, -5.0 / 1024.0};
      break;
    default:
      throw std::invalid_argument("PredictionSpec: gamma must be 1, 2 or 3");
  }
  return spec;
}

}  // namespace mrlbm
