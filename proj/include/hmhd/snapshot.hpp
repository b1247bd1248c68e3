#pragma once

#include <cstdint>
#include <string>

#include "hmhd/evolve.hpp"

namespace hmhd {

inline constexpr std::uint32_t snapshot_version = 1;

std::uint32_t model_tag(System s);
System system_from_tag(std::uint32_t tag);

struct Snapshot {
    ModelSpec model;  // system, alpha, beta and eps come from the file
    SimState state;
};

// Little-endian: "HMHD", u32 version, u32 dim, u32 size per axis, u32 model tag, f64 alpha, beta,
// eps, time, then b1..b3 (and u1..u3 for Hall-MHD) as (re, im) f64 pairs in storage order.
void write_snapshot(const std::string& path, const ModelSpec& spec, const SimState& state);
// band_limit < 0 selects n/2 - 1. Throws std::runtime_error on malformed files.
Snapshot read_snapshot(const std::string& path, int band_limit = -1);

}
