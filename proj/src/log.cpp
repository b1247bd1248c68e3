#include "hmhd/log.hpp"

#include <iostream>
#include <mutex>

namespace hmhd {

namespace {

std::mutex mu;

WarningHandler& handler()
{
    static WarningHandler h = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
    return h;
}

}

void warn(const std::string& msg)
{
    std::lock_guard lock(mu);
    if (handler()) handler()(msg);
}

WarningHandler set_warning_handler(WarningHandler h)
{
    std::lock_guard lock(mu);
    std::swap(h, handler());
    return h;
}

}
