#include "afq/cf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace afq {

namespace {

void check_terms(const std::vector<Int>& head, const std::vector<Int>& period) {
    if (head.empty()) throw std::domain_error("cf: empty term list");
    if (head[0] != 0) throw std::domain_error("cf: terms[0] must be 0 for values in [0,1)");
    for (std::size_t j = 1; j < head.size(); ++j)
        if (head[j] < 1) throw std::domain_error("cf: term " + std::to_string(j) + " must be >= 1");
    for (const Int& t : period)
        if (t < 1) throw std::domain_error("cf: periodic terms must be >= 1");
}

}  // namespace

ContinuedFraction::ContinuedFraction(std::vector<Int> head, std::vector<Int> period)
    : head_(std::move(head)), period_(std::move(period)) {}

ContinuedFraction ContinuedFraction::finite(std::vector<Int> terms) {
    check_terms(terms, {});
    return ContinuedFraction(std::move(terms), {});
}

ContinuedFraction ContinuedFraction::periodic(std::vector<Int> head, std::vector<Int> period) {
    if (period.empty()) throw std::domain_error("cf: periodic representation needs a nonempty period");
    check_terms(head, period);
    return ContinuedFraction(std::move(head), std::move(period));
}

bool ContinuedFraction::has_term(std::size_t j) const {
    return j < head_.size() || !period_.empty();
}

const Int& ContinuedFraction::term(std::size_t j) const {
    if (j < head_.size()) return head_[j];
    if (period_.empty()) throw std::out_of_range("cf: term index past finite stream");
    return period_[(j - head_.size()) % period_.size()];
}

bool ContinuedFraction::definitely_equal(const ContinuedFraction& other) const {
    if (is_finite() != other.is_finite()) return false;
    if (is_finite()) return head_ == other.head_;
    // Two eventually periodic streams agree iff they agree through the longer
    // head plus one common multiple of the period lengths.
    const std::size_t h = std::max(head_.size(), other.head_.size());
    const std::size_t l = std::lcm(period_.size(), other.period_.size());
    for (std::size_t j = 0; j < h + l; ++j)
        if (term(j) != other.term(j)) return false;
    return true;
}

std::string ContinuedFraction::to_string() const {
    std::ostringstream out;
    out << "0";
    if (head_.size() > 1 || !period_.empty()) out << ";";
    for (std::size_t j = 1; j < head_.size(); ++j) {
        if (j > 1) out << ",";
        out << head_[j].get_str();
    }
    if (!period_.empty()) {
        if (head_.size() > 1) out << ",";
        out << "(";
        for (std::size_t j = 0; j < period_.size(); ++j) {
            if (j > 0) out << ",";
            out << period_[j].get_str();
        }
        out << ")";
    }
    return out.str();
}

ContinuedFraction parse_cf(const std::string& text) {
    auto fail = [&](const std::string& why) {
        throw std::domain_error("cf parse '" + text + "': " + why);
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) fail("empty");
    std::vector<Int> head;
    std::vector<Int> period;
    std::size_t semi = s.find(';');
    std::string first = (semi == std::string::npos) ? s : s.substr(0, semi);
    if (first.empty()) fail("missing leading term");
    head.emplace_back(first.c_str());
    std::string rest = (semi == std::string::npos) ? std::string() : s.substr(semi + 1);
    bool in_period = false;
    std::string cur;
    auto flush = [&](bool to_period) {
        if (cur.empty()) fail("empty term");
        for (char c : cur)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad term '" + cur + "'");
        (to_period ? period : head).emplace_back(cur.c_str());
        cur.clear();
    };
    bool period_closed = false;
    for (char c : rest) {
        if (period_closed) fail("trailing text after period");
        if (c == ',') {
            if (!cur.empty()) flush(in_period);
        } else if (c == '(') {
            if (in_period) fail("nested period");
            if (!cur.empty()) flush(false);
            in_period = true;
        } else if (c == ')') {
            if (!in_period) fail("unmatched ')'");
            if (!cur.empty()) flush(true);
            in_period = false;
            period_closed = true;
        } else {
            cur += c;
        }
    }
    if (in_period) fail("unterminated period");
    if (!cur.empty()) flush(false);
    if (period.empty()) return ContinuedFraction::finite(std::move(head));
    return ContinuedFraction::periodic(std::move(head), std::move(period));
}

ContinuedFraction cf_from_rational(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("cf_from_rational: zero denominator");
    if (num < 0 || num >= den || den < 0)
        throw std::domain_error("cf_from_rational: value must lie in [0,1)");
    std::vector<Int> terms{0};
    Int x = num, y = den;
    while (x != 0) {
        Int a = y / x;
        Int r = y % x;
        terms.push_back(a);
        y = x;
        x = r;
    }
    return ContinuedFraction::finite(std::move(terms));
}

ContinuedFraction cf_from_double(double x, std::size_t max_terms) {
    if (!(x >= 0.0) || x >= 1.0) throw std::domain_error("cf_from_double: value must lie in [0,1)");
    if (max_terms == 0) throw std::domain_error("cf_from_double: need at least one term");
    Rat v(x);  // the exact dyadic the double encodes
    ContinuedFraction full = cf_from_rational(v.get_num(), v.get_den());
    if (full.head_length() <= max_terms) return full;
    std::vector<Int> cut(full.head().begin(), full.head().begin() + max_terms);
    return ContinuedFraction::finite(std::move(cut));
}

std::vector<ConvergentPair> convergents(const ContinuedFraction& cf, std::size_t n) {
    std::vector<ConvergentPair> out;
    out.reserve(n + 1);
    Int pm1 = 1, qm1 = 0;  // formal (p_{-1}, q_{-1})
    Int p, q;
    for (std::size_t k = 0; k <= n; ++k) {
        if (!cf.has_term(k))
            throw std::out_of_range("convergents: depth " + std::to_string(n) +
                                    " exceeds the finite stream");
        const Int& a = cf.term(k);
        if (k == 0) {
            p = a;
            q = 1;
        } else {
            Int np = a * p + pm1;
            Int nq = a * q + qm1;
            pm1 = p;
            qm1 = q;
            p = np;
            q = nq;
        }
        out.push_back({p, q, k});
    }
    return out;
}

Cmp compare_to_rational(const ContinuedFraction& cf, const Int& num, const Int& den,
                        std::size_t depth) {
    return compare_to_rational(cf, make_rat(num, den), depth);
}

Cmp compare_to_rational(const ContinuedFraction& cf, const Rat& target, std::size_t depth) {
    Int pm1 = 1, qm1 = 0;
    Int p, q;
    for (std::size_t k = 0;; ++k) {
        if (k > depth) return Cmp::Indeterminate;
        const Int& a = cf.term(k);
        if (k == 0) {
            p = a;
            q = 1;
        } else {
            Int np = a * p + pm1;
            Int nq = a * q + qm1;
            pm1 = p;
            qm1 = q;
            p = np;
            q = nq;
        }
        Rat ck = make_rat(p, q);
        if (cf.has_term(k + 1)) {
            // More terms follow, so the value lies strictly beyond c_k on the
            // side given by the parity of k.
            if (k % 2 == 0) {
                if (target <= ck) return Cmp::Greater;
            } else {
                if (target >= ck) return Cmp::Less;
            }
        } else {
            // Finite stream exhausted: its own value is c_k, and every
            // continuation lies between c_k and the mediant with c_{k-1}.
            if (target == ck) return Cmp::EqualAtDepth;
            Rat med = make_rat(p + pm1, q + qm1);
            const Rat& lo = std::min(ck, med);
            const Rat& hi = std::max(ck, med);
            if (target < lo) return Cmp::Greater;
            if (target > hi) return Cmp::Less;
            return Cmp::Indeterminate;
        }
    }
}

Enclosure value_enclosure(const ContinuedFraction& cf, std::size_t depth) {
    Enclosure enc{Rat(0), Rat(1)};  // domain bound for values in [0,1)
    Int pm1 = 1, qm1 = 0;
    Int p, q;
    for (std::size_t k = 0; k <= depth && cf.has_term(k); ++k) {
        const Int& a = cf.term(k);
        if (k == 0) {
            p = a;
            q = 1;
        } else {
            Int np = a * p + pm1;
            Int nq = a * q + qm1;
            pm1 = p;
            qm1 = q;
            p = np;
            q = nq;
        }
        Rat ck = make_rat(p, q);
        if (!cf.has_term(k + 1)) {
            Rat med = make_rat(p + pm1, q + qm1);
            enc.lo = std::min(ck, med);
            enc.hi = std::max(ck, med);
            return enc;
        }
        if (k % 2 == 0)
            enc.lo = ck;
        else
            enc.hi = ck;
    }
    return enc;
}

Rat BaireDistance::to_rational() const {
    if (kind == Kind::Dyadic) return value->to_rational();
    return Rat(0);
}

BaireDistance baire_distance(const ContinuedFraction& x, const ContinuedFraction& y,
                             std::size_t depth) {
    std::size_t j = 0;
    for (; j <= depth; ++j) {
        if (!x.has_term(j) || !y.has_term(j)) break;
        if (x.term(j) != y.term(j))
            return {BaireDistance::Kind::Dyadic, Dyadic{static_cast<unsigned long>(j)}, j + 1};
    }
    if (x.definitely_equal(y)) return {BaireDistance::Kind::Zero, std::nullopt, j};
    return {BaireDistance::Kind::AgreeToDepth, std::nullopt, j};
}

}  // namespace afq
