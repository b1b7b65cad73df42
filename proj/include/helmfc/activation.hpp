#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace helmfc {

enum class Activation { Sigmoid, Tanh, Relu };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation act);

inline double activate(Activation act, double t) {
  switch (act) {
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-t));
    case Activation::Tanh: return std::tanh(t);
    case Activation::Relu: return t > 0.0 ? t : 0.0;
  }
  return t;
}

}  // namespace helmfc
