#pragma once

#include <vector>

namespace koszulab {

// Permutations of {0..n-1} stored as images: p[i] is the image of i.
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm inverse(const Perm& p);
// (a * b)(i) = a(b(i)).
Perm compose(const Perm& a, const Perm& b);
bool is_identity(const Perm& p);
int inversions(const Perm& p);
int sign(const Perm& p);

// Reduced word for p in adjacent transpositions s_i = (i i+1). The returned
// list w satisfies p = s_{w[k-1]} ... s_{w[1]} s_{w[0]}, so a left action is
// applied by acting with w[0] first.
std::vector<int> reduced_word(const Perm& p);

// Sign of the permutation that sorts the sequence (number of inverted pairs).
int sort_sign(const std::vector<int>& seq);

}  // namespace koszulab
