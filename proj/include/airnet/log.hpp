#pragma once

#include <string_view>

namespace airnet::log {

// Verbosity comes from AIRNET_LOG (trace, debug, info, warn, error, off);
// default is warn. Output goes to stderr.
void debug(std::string_view msg);
void info(std::string_view msg);
void warn(std::string_view msg);

}  // namespace airnet::log
