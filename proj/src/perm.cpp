#include "koszulab/perm.hpp"

#include <numeric>
#include <stdexcept>

namespace koszulab {

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm inverse(const Perm& p) {
    Perm q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

Perm compose(const Perm& a, const Perm& b) {
    if (a.size() != b.size()) throw std::invalid_argument("permutation size mismatch");
    Perm c(a.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
}

bool is_identity(const Perm& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

int inversions(const Perm& p) {
    int c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++c;
    return c;
}

int sign(const Perm& p) { return sort_sign(p); }

std::vector<int> reduced_word(const Perm& p) {
    Perm q = p;
    std::vector<int> word;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < q.size(); ++i) {
            if (q[i] > q[i + 1]) {
                std::swap(q[i], q[i + 1]);
                word.push_back(static_cast<int>(i));
                changed = true;
            }
        }
    }
    return word;
}

int sort_sign(const std::vector<int>& seq) { return inversions(seq) % 2 ? -1 : 1; }

}  // namespace koszulab
