#pragma once

#include "afq/rational.hpp"

#include <cstdint>
#include <vector>

namespace afq {

/// One row of the Farey tessellation: q(n,k), p(n,k) and r(n,k) = p/q for
/// k = 0..2^{n-1}, built by mediant insertion.  0-based vertex indexing.
struct FareyLevel {
    int n = 0;
    std::vector<Int> q;
    std::vector<Int> p;

    std::size_t size() const { return q.size(); }
    Rat r(std::size_t k) const { return make_rat(p.at(k), q.at(k)); }
};

/// Nonnegative integer partial multiplicity matrix, dense row-major.
/// Rows index the target level, columns the source level.
struct MultiplicityMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> entries;

    MultiplicityMatrix() = default;
    MultiplicityMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    std::int64_t& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    std::int64_t at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    bool operator==(const MultiplicityMatrix&) const = default;
};

/// Product a*b (apply b first); entries are overflow-checked.
MultiplicityMatrix matmul(const MultiplicityMatrix& a, const MultiplicityMatrix& b);

/// Row-major literal, e.g. make_matrix({{1,0},{1,1},{0,1}}).
MultiplicityMatrix make_matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

bool has_zero_row(const MultiplicityMatrix& m, std::size_t* which = nullptr);
bool has_zero_column(const MultiplicityMatrix& m, std::size_t* which = nullptr);

// Row construction.  The parallel kernels and their serial references compute
// identical arrays; the serial ones are kept as the reference implementation
// for tests and the benchmark.
FareyLevel farey_level(int n);
FareyLevel farey_level_serial(int n);
FareyLevel farey_next_level(const FareyLevel& prev);
FareyLevel farey_next_level_serial(const FareyLevel& prev);

/// Edge rule of the Farey diagram between consecutive levels: vertex k at
/// level n connects to vertex l at level n+1 iff |2k - l| <= 1, single edges.
bool farey_edge(std::size_t k, std::size_t l);

/// The (2^n + 1) x (2^{n-1} + 1) partial multiplicity matrix F_n.
MultiplicityMatrix farey_multiplicity_matrix(int n);

/// True iff F_n applied to the level-n label vector reproduces the level-(n+1)
/// labels entrywise, i.e. the tower embedding is unital.
bool check_unital_embedding(int n);

// Row diagnostics (parallel sweeps plus serial references).
bool farey_row_determinants_ok(const FareyLevel& lv);         // p[k+1]q[k]-p[k]q[k+1] == 1
bool farey_row_determinants_ok_serial(const FareyLevel& lv);
bool farey_row_increasing(const FareyLevel& lv);              // r strictly increasing

}  // namespace afq
