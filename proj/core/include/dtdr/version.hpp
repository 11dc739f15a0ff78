#pragma once

#include <string_view>

namespace dtdr {

std::string_view version();

} // namespace dtdr
