#include "afq/rational.hpp"

#include <stdexcept>

namespace afq {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat Dyadic::to_rational() const {
    Int den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), exponent);
    return make_rat(1, den);
}

double Dyadic::to_double() const {
    return to_rational().get_d();
}

std::string Dyadic::to_string() const {
    return "2^-" + std::to_string(exponent);
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace afq
