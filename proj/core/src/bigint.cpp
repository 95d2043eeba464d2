#include "cuspflow/bigint.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cuspflow {

namespace mp = boost::multiprecision;

double log_big(const BigInt& x) {
    if (x <= 0) throw std::domain_error("log_big: x must be positive");
    const unsigned bits = msb(x);  // floor(log2 x)
    if (bits <= 900) return std::log(x.convert_to<double>());
    // Keep a 64-bit mantissa, shift out the rest.
    const unsigned drop = bits - 62;
    const double mant = BigInt(x >> drop).convert_to<double>();
    return std::log(mant) + static_cast<double>(drop) * 0.69314718055994530942;
}

double log_rat(const BigRat& r) {
    if (r <= 0) throw std::domain_error("log_rat: r must be positive");
    return log_big(numerator(r)) - log_big(denominator(r));
}

BigInt isqrt_floor(const BigInt& x) {
    if (x < 0) throw std::domain_error("isqrt_floor: negative input");
    return sqrt(x);
}

BigInt iroot_floor(const BigInt& x, unsigned k) {
    if (x < 0) throw std::domain_error("iroot_floor: negative input");
    if (k == 0) throw std::domain_error("iroot_floor: k == 0");
    if (k == 1 || x <= 1) return x;
    if (k == 2) return sqrt(x);
    // Newton iteration with a log2-based initial guess.
    const unsigned bits = msb(x);
    BigInt r = BigInt(1) << (bits / k + 1);
    for (;;) {
        BigInt rk1 = pow(r, k - 1);
        BigInt next = ((k - 1) * r * rk1 + x) / (k * rk1);
        if (next >= r) break;
        r = next;
    }
    while (pow(r, k) > x) --r;
    while (pow(r + 1, k) <= x) ++r;
    return r;
}

BigInt iroot_ceil(const BigInt& x, unsigned k) {
    BigInt f = iroot_floor(x, k);
    return pow(f, k) == x ? f : f + 1;
}

BigInt floor_rat(const BigRat& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

BigInt ceil_rat(const BigRat& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n > 0 && q * d != n) ++q;
    return q;
}

BigRat abs_rat(const BigRat& r) { return r < 0 ? BigRat(-r) : r; }

std::optional<BigRat> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt p(s.substr(0, slash));
            BigInt q(s.substr(slash + 1));
            if (q == 0) return std::nullopt;
            return BigRat(p, q);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return BigRat(BigInt(s));
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (fp.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
        bool neg = !ip.empty() && ip[0] == '-';
        BigInt whole = ip.empty() || ip == "-" || ip == "+" ? BigInt(0) : BigInt(ip);
        BigInt scale = pow(BigInt(10), static_cast<unsigned>(fp.size()));
        BigInt frac = fp.empty() ? BigInt(0) : BigInt(fp);
        BigInt num = abs(whole) * scale + frac;
        if (neg || whole < 0) num = -num;
        return BigRat(num, scale);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string rat_string(const BigRat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace cuspflow
