#pragma once

#include <span>

namespace rlsw::detail {

// Low-pass taps for N = 2..10 vanishing moments; empty span otherwise.
std::span<const double> extremal_phase_taps(int n);
std::span<const double> least_asymmetric_taps(int n);

}  // namespace rlsw::detail
