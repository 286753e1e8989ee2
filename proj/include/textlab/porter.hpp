#pragma once

#include <string>
#include <string_view>

namespace textlab {

// Porter stemming algorithm, steps 1a-5b, matching the reference
// implementation that produced the classic vocabulary/output test pair
// (including its two step-2 amendments: -bli and -logi). Pure function of
// the token; tokens of length <= 2 pass through unchanged.
std::string porter_stem(std::string_view token);

}  // namespace textlab
