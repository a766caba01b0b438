#ifndef DAVOC_MODELS_GRADCHECK_SUITE_H_
#define DAVOC_MODELS_GRADCHECK_SUITE_H_

#include <string>
#include <vector>

#include "davoc/nn/gradcheck.h"

namespace davoc {

struct ComponentCheck {
  std::string component;
  nn::GradCheckResult result;
  // Largest input-gradient error, checked separately from the parameters.
  double input_relative_error = 0.0;
  // Only meaningful for the GRL: max |forward(x) - x|.
  double forward_deviation = 0.0;
};

// dense, relu, meanpool, softmax_ce, grl, lstm, bilstm, blstm_stack,
// mlp_stack
std::vector<std::string> GradCheckComponents();

// Tiny dimensions, fixed seed. Losses are random linear read-outs of the
// component output, or cross-entropy for the stacks.
ComponentCheck CheckComponent(const std::string& component, double eps = 1e-5,
                              uint64_t seed = 7);

}  // namespace davoc

#endif  // DAVOC_MODELS_GRADCHECK_SUITE_H_
