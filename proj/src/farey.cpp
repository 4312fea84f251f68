#include "afq/farey.hpp"

#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace afq {

namespace {

// Parallel loops only pay off once a row has a few thousand entries.
constexpr std::size_t kParallelCutoff = 1 << 12;
constexpr int kMaxRowLevel = 25;

void check_level(int n, int max = kMaxRowLevel) {
    if (n < 1) throw std::domain_error("farey: level must be >= 1 (level 0 is the scalar algebra)");
    if (n > max)
        throw std::domain_error("farey: level " + std::to_string(n) +
                                " exceeds the materialization guard (" + std::to_string(max) + ")");
}

FareyLevel seed_level() {
    FareyLevel lv;
    lv.n = 1;
    lv.q = {Int(1), Int(1)};
    lv.p = {Int(0), Int(1)};
    return lv;
}

template <bool Parallel>
FareyLevel next_level_impl(const FareyLevel& prev) {
    FareyLevel lv;
    lv.n = prev.n + 1;
    const std::size_t m = prev.size();  // 2^{n-1}+1
    const std::size_t sz = 2 * m - 1;
    lv.q.resize(sz);
    lv.p.resize(sz);
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for if (Parallel && sz >= kParallelCutoff) schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        lv.q[2 * k] = prev.q[k];
        lv.p[2 * k] = prev.p[k];
        if (k + 1 < count) {
            lv.q[2 * k + 1] = prev.q[k] + prev.q[k + 1];
            lv.p[2 * k + 1] = prev.p[k] + prev.p[k + 1];
        }
    }
    return lv;
}

template <bool Parallel>
FareyLevel level_impl(int n) {
    check_level(n);
    FareyLevel lv = seed_level();
    for (int i = 1; i < n; ++i) lv = next_level_impl<Parallel>(lv);
    return lv;
}

}  // namespace

MultiplicityMatrix matmul(const MultiplicityMatrix& a, const MultiplicityMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    MultiplicityMatrix out(a.rows, b.cols);
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const std::int64_t av = a.at(r, k);
            if (av == 0) continue;
            for (std::size_t c = 0; c < b.cols; ++c) {
                std::int64_t term = 0, sum = 0;
                if (__builtin_mul_overflow(av, b.at(k, c), &term) ||
                    __builtin_add_overflow(out.at(r, c), term, &sum))
                    throw std::overflow_error("matmul: multiplicity overflow");
                out.at(r, c) = sum;
            }
        }
    return out;
}

MultiplicityMatrix make_matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    MultiplicityMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols) throw std::invalid_argument("make_matrix: ragged rows");
        std::size_t c = 0;
        for (std::int64_t v : row) m.at(r, c++) = v;
        ++r;
    }
    return m;
}

bool has_zero_row(const MultiplicityMatrix& m, std::size_t* which) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        bool any = false;
        for (std::size_t c = 0; c < m.cols && !any; ++c) any = m.at(r, c) != 0;
        if (!any) {
            if (which) *which = r;
            return true;
        }
    }
    return false;
}

bool has_zero_column(const MultiplicityMatrix& m, std::size_t* which) {
    for (std::size_t c = 0; c < m.cols; ++c) {
        bool any = false;
        for (std::size_t r = 0; r < m.rows && !any; ++r) any = m.at(r, c) != 0;
        if (!any) {
            if (which) *which = c;
            return true;
        }
    }
    return false;
}

FareyLevel farey_level(int n) { return level_impl<true>(n); }
FareyLevel farey_level_serial(int n) { return level_impl<false>(n); }
FareyLevel farey_next_level(const FareyLevel& prev) { return next_level_impl<true>(prev); }
FareyLevel farey_next_level_serial(const FareyLevel& prev) { return next_level_impl<false>(prev); }

bool farey_edge(std::size_t k, std::size_t l) {
    const std::size_t two_k = 2 * k;
    return (l >= two_k ? l - two_k : two_k - l) <= 1;
}

MultiplicityMatrix farey_multiplicity_matrix(int n) {
    check_level(n, 13);  // the dense (2^n+1) x (2^{n-1}+1) array grows fast
    const std::size_t colsz = (std::size_t(1) << (n - 1)) + 1;
    const std::size_t rowsz = 2 * colsz - 1;
    MultiplicityMatrix m(rowsz, colsz);
    for (std::size_t l = 0; l < rowsz; ++l)
        for (std::size_t k = 0; k < colsz; ++k)
            if (farey_edge(k, l)) m.at(l, k) = 1;
    return m;
}

bool check_unital_embedding(int n) {
    const FareyLevel cur = farey_level(n);
    const FareyLevel nxt = farey_next_level(cur);
    // Row l of F_n sums q(n,k) over the sources with |2k - l| <= 1.
    for (std::size_t l = 0; l < nxt.size(); ++l) {
        Int acc = 0;
        if (l % 2 == 0) {
            acc = cur.q[l / 2];
        } else {
            acc = cur.q[l / 2] + cur.q[l / 2 + 1];
        }
        if (acc != nxt.q[l]) return false;
    }
    return true;
}

namespace {

template <bool Parallel>
bool determinants_ok_impl(const FareyLevel& lv) {
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(lv.size()) - 1;
    bool ok = true;
#pragma omp parallel for if (Parallel && lv.size() >= kParallelCutoff) schedule(static) \
    reduction(&& : ok)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        Int det = lv.p[k + 1] * lv.q[k] - lv.p[k] * lv.q[k + 1];
        ok = ok && (det == 1);
    }
    return ok;
}

}  // namespace

bool farey_row_determinants_ok(const FareyLevel& lv) { return determinants_ok_impl<true>(lv); }
bool farey_row_determinants_ok_serial(const FareyLevel& lv) {
    return determinants_ok_impl<false>(lv);
}

bool farey_row_increasing(const FareyLevel& lv) {
    for (std::size_t k = 0; k + 1 < lv.size(); ++k) {
        // r(k) < r(k+1)  <=>  p(k) q(k+1) < p(k+1) q(k), all q positive
        if (lv.p[k] * lv.q[k + 1] >= lv.p[k + 1] * lv.q[k]) return false;
    }
    return true;
}

}  // namespace afq
