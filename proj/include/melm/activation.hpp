#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace melm {

enum class Activation { Sigmoid, Tanh, Sine };

template <typename Scalar>
Scalar activate(Activation g, Scalar z) {
    switch (g) {
        case Activation::Sigmoid: return Scalar(1) / (Scalar(1) + std::exp(-z));
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sine: return std::sin(z);
    }
    throw std::invalid_argument("activate: unknown activation tag");
}

inline std::string_view to_string(Activation g) {
    switch (g) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::Sine: return "sine";
    }
    return "?";
}

inline Activation parse_activation(std::string_view name) {
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sine") return Activation::Sine;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

}  // namespace melm
