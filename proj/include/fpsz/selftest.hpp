#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpsz {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Randomized property checks over every module. Each takes a seed and is
// deterministic given it.
PropertyResult check_word_order(std::uint64_t seed);
PropertyResult check_word_star_and_length(std::uint64_t seed);
PropertyResult check_centered_alternating(std::uint64_t seed, int count = 200);
PropertyResult check_free_clt(int k_max = 6);
PropertyResult check_trace_cyclic(std::uint64_t seed, int count = 150);
PropertyResult check_cache_transparency(std::uint64_t seed, int count = 100);
PropertyResult check_restriction(std::uint64_t seed, int count = 100);
PropertyResult check_gram_determinant(std::uint64_t seed);
PropertyResult check_gram_psd_minors(std::uint64_t seed, int count = 40);
PropertyResult check_block_factorization();
PropertyResult check_norm_routes_1d();
PropertyResult check_jacobi_identities();
PropertyResult check_verblunsky_identities();
PropertyResult check_recursion_closed_form(std::uint64_t seed, int trials = 1000);
PropertyResult check_entropy_routes();
PropertyResult check_tail_bounds();
PropertyResult check_sq_routes();
PropertyResult check_forcing_identity();
PropertyResult check_scale_sensitivity();
PropertyResult check_convergence(int threads = 1);

std::vector<PropertyResult> run_selftest(std::uint64_t seed, int threads = 1);

}  // namespace fpsz
