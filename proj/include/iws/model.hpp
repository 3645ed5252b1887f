#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace iws {

/// The seven distinct inspection laws of the 16 models A-P.
enum class Model { ABCD, EF, GH, IKL, J, MN, OP };

inline constexpr std::array<Model, 7> kAllModels{Model::ABCD, Model::EF, Model::GH, Model::IKL,
                                                 Model::J,    Model::MN, Model::OP};

inline constexpr std::string_view to_string(Model m) {
  switch (m) {
    case Model::ABCD: return "ABCD";
    case Model::EF: return "EF";
    case Model::GH: return "GH";
    case Model::IKL: return "IKL";
    case Model::J: return "J";
    case Model::MN: return "MN";
    case Model::OP: return "OP";
  }
  return "?";
}

inline std::optional<Model> parse_model(std::string_view label) {
  for (Model m : kAllModels) {
    if (to_string(m) == label) return m;
  }
  return std::nullopt;
}

inline constexpr std::size_t index_of(Model m) { return static_cast<std::size_t>(m); }

/// Models whose inspection order is driven by sampling weights q.
inline constexpr bool needs_weights(Model m) {
  return m == Model::IKL || m == Model::J || m == Model::MN || m == Model::OP;
}

/// How a failed recognition is coupled to the Gamma-item in the defective
/// models GH and OP.
///   per_item:    the Gamma-item C is recognised with probability s_C at its
///                (only) inspection. This is the law the inspection process
///                actually generates.
///   independent: detection is an independent Bernoulli(sum s_i p_i) event,
///                N = B N_perfect + (1 - B) inf. Agrees with per_item iff all
///                s_i are equal.
enum class DetectionLaw { per_item, independent };

inline constexpr std::string_view to_string(DetectionLaw law) {
  return law == DetectionLaw::per_item ? "per-item" : "independent";
}

inline std::optional<DetectionLaw> parse_detection_law(std::string_view label) {
  if (label == "per-item") return DetectionLaw::per_item;
  if (label == "independent") return DetectionLaw::independent;
  return std::nullopt;
}

}  // namespace iws
