#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "icem/envs/integrator.hpp"
#include "icem/envs/pendulum.hpp"
#include "icem/envs/point_mass.hpp"
#include "icem/types.hpp"

namespace icem::harness {

using AnyEnvironment = std::variant<PointMassSparseEnv, IntegratorEnv, PendulumEnv>;

struct EnvironmentInfo {
  std::string_view id;
  std::size_t episode_length;  // default T
  double beta;                 // default colored-noise exponent
};

inline constexpr std::array<EnvironmentInfo, 3> kEnvironments{{
    {"point_mass_sparse", 50, 2.5},
    {"integrator", 50, 2.5},
    {"pendulum", 150, 2.0},
}};

inline const EnvironmentInfo& environment_info(std::string_view id) {
  for (const auto& info : kEnvironments) {
    if (info.id == id) return info;
  }
  std::string known;
  for (const auto& info : kEnvironments) known += (known.empty() ? "" : ", ") + std::string(info.id);
  throw ValidationError("unknown environment '" + std::string(id) + "' (expected one of: " + known + ")");
}

inline AnyEnvironment make_environment(std::string_view id) {
  environment_info(id);
  if (id == "point_mass_sparse") return PointMassSparseEnv{};
  if (id == "integrator") return IntegratorEnv{};
  return PendulumEnv{};
}

}  // namespace icem::harness
