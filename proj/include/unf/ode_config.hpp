#pragma once

#include <cstddef>
#include <string_view>

namespace unf {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Step cap; keeps the rotation per step well below pi/4 near the focus region.
  double max_step = 0.1;
  double t_max = 1000.0;
  double escape_radius = 50.0;
  double initial_step = 0.0;
  std::size_t max_steps = 20'000'000;

  /// Throws InvalidDomain when a field is out of range.
  void validate() const;
};

enum class Outcome { Completed, Stopped, Escaped, StepSizeUnderflow, EventNotFound };

std::string_view to_string(Outcome o) noexcept;

}  // namespace unf
