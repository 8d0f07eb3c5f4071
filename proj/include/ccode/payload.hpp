#pragma once

// Applies a conversion plan element-wise over multi-symbol node payloads.
// The parallel variant splits the symbol range across OpenMP threads; the
// serial variant is the reference the tests compare against.

#include <vector>

#include "ccode/framework.hpp"
#include "ccode/galois.hpp"

namespace ccode {

// payloads[stripe][node] is a vector of symbols; all nodes must hold the
// same symbol count.
using StripePayloads = std::vector<std::vector<std::vector<Elem>>>;

StripePayloads apply_plan_serial(const ConversionPlan& plan, const StripePayloads& initial,
                                 const Field& f);

// Identical output to apply_plan_serial; uses OpenMP when compiled in.
StripePayloads apply_plan_parallel(const ConversionPlan& plan,
                                   const StripePayloads& initial, const Field& f);

} // namespace ccode
