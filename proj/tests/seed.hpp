#pragma once

#include <cstdint>

// Seed for randomized property tests. Set with --seed=N on the test binary
// command line or the KOSZULAB_SEED environment variable; printed at startup.
std::uint64_t test_seed();
