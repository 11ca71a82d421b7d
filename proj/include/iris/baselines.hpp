// baselines.hpp - reference layouts Iris is compared against
#pragma once

#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

/// One element per bus word, arrays sent whole in due-date order.
Layout naive_layout(const Problem& p);

/// Arrays sent one after another in due-date order, each cycle carrying as
/// many elements of the current array as its delta allows.
Layout packed_layout(const Problem& p);

}  // namespace iris
