#pragma once

#include <functional>
#include <string>

namespace hmhd {

using WarningHandler = std::function<void(const std::string&)>;

// Default handler writes "warning: <msg>" to stderr.
void warn(const std::string& msg);
// Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler h);

}
