#pragma once

#include <string>

#include "transwave/config.hpp"
#include "transwave/model.hpp"

#ifndef TRANSWAVE_FIXTURES
#error "TRANSWAVE_FIXTURES must point at tests/fixtures"
#endif

namespace transwave::testing {

inline std::string fixture(const std::string& name) { return std::string(TRANSWAVE_FIXTURES) + "/" + name; }

// L = (1, 1.2, 3), a = b = 1, mu1 = 1, mu2 = 0.3, beta = 0.3, tau = 0.5, d = 0.
inline ProblemSpec reference_spec() {
  ProblemSpec s;
  s.geometry = DomainGeometry{1.0, 1.2, 3.0, 1.0, 1.0};
  s.weights.mu1 = Mu1Constant{1.0};
  s.weights.mu2 = Mu2Constant{0.3};
  s.weights.M1 = 1.0;
  s.weights.M2 = 1.0;
  s.weights.beta = 0.3;
  s.delay = DelaySpec{DelayConstant{0.5}, 0.5, 0.5, 0.0};
  s.xi_bar = 1.0;
  s.initial.u0 = SpaceBump{2.1, 1.0, 1.0};
  s.initial.v0 = s.initial.u0;
  return s;
}

}  // namespace transwave::testing
