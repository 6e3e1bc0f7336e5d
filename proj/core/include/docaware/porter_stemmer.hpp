#pragma once

#include <string>
#include <string_view>

namespace docaware {

/// Porter's suffix-stripping algorithm with the rule tables as originally
/// published in 1980 (ABLI->ABLE in step 2, no LOGI rule).
///
/// Input must be lowercase a-z; words of length <= 2 are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace docaware
