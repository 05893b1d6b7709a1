#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "seed.hpp"

namespace {
std::uint64_t g_seed = 20240611;
}

std::uint64_t test_seed() { return g_seed; }

int main(int argc, char** argv) {
    if (const char* env = std::getenv("KOSZULAB_SEED")) g_seed = std::stoull(env);
    std::vector<char*> rest;
    for (int i = 0; i < argc; ++i) {
        if (std::strncmp(argv[i], "--seed=", 7) == 0)
            g_seed = std::stoull(argv[i] + 7);
        else
            rest.push_back(argv[i]);
    }
    std::cout << "property seed: " << g_seed << " (override with --seed=N)" << std::endl;
    doctest::Context context;
    context.applyCommandLine(static_cast<int>(rest.size()), rest.data());
    return context.run();
}
