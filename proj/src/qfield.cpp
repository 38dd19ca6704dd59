#include "tq/qfield.hpp"

namespace tq {

std::pair<Int, Int> squarefree_reduce(const Int& n) {
    if (n == 0) throw std::invalid_argument("squarefree_reduce: zero input");
    // budget bounds the trial divisor, not the input: smooth inputs of any
    // size factor fully, and anything |n| <= 10^12 is always certified
    Int pbound("1000000");
    Int m = abs(n);
    Int d = 1, c = 1;
    Int p = 2;
    while (p * p <= m && p <= pbound) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            for (int i = 0; i < e / 2; ++i) c *= p;
            if (e % 2) d *= p;
        }
        p += (p == 2) ? 1 : 2;
    }
    if (p * p <= m)
        throw std::invalid_argument("squarefree_reduce: factorization budget exceeded");
    d *= m;  // leftover is 1 or prime
    if (n < 0) d = -d;
    return {d, c};
}

Int field_discriminant(const Int& d) {
    if (d == 0 || d == 1) throw std::invalid_argument("field_discriminant: d must not be 0 or 1");
    auto [sf, c] = squarefree_reduce(d);
    if (c != 1) throw std::invalid_argument("field_discriminant: d not squarefree");
    Int r = d % 4;  // GMP: sign follows dividend
    if (r < 0) r += 4;
    return (r == 1) ? d : 4 * d;
}

int kronecker(const Int& a, const Int& n) {
    if (n == 0) throw std::invalid_argument("kronecker: n = 0");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

const char* split_name(SplitType s) {
    switch (s) {
        case SplitType::SPLIT: return "SPLIT";
        case SplitType::INERT: return "INERT";
        default: return "RAMIFIED";
    }
}

QuadField::QuadField(const Int& d_) : d(d_) {
    if (d == 0) throw std::invalid_argument("QuadField: d = 0");
    auto [sf, c] = squarefree_reduce(d);
    if (c != 1) throw std::invalid_argument("QuadField: d not squarefree");
    if (d == 1) {
        disc = 1;
    } else {
        disc = field_discriminant(d);
    }
}

SplitType splitting_type(const QuadField& K, const Int& p) {
    if (p == 2) {
        Int r = K.d % 8;
        if (r < 0) r += 8;
        if (r == 1) return SplitType::SPLIT;
        if (r == 5) return SplitType::INERT;
        return SplitType::RAMIFIED;  // d = 2,3 (mod 4)
    }
    if (K.d % p == 0) return SplitType::RAMIFIED;
    return kronecker(K.d, p) == 1 ? SplitType::SPLIT : SplitType::INERT;
}

QuadElem::QuadElem(const Rat& a_, const Rat& b_, const Int& d_) : a(a_), b(b_), d(d_) {
    if (d == 1) { a += b; b = 0; }
    a.canonicalize();
    b.canonicalize();
}

static void check_same_field(const QuadElem& x, const QuadElem& y) {
    if (x.d != y.d) throw std::invalid_argument("QuadElem: field mismatch");
}

QuadElem operator+(const QuadElem& x, const QuadElem& y) {
    check_same_field(x, y);
    return QuadElem(x.a + y.a, x.b + y.b, x.d);
}

QuadElem operator-(const QuadElem& x, const QuadElem& y) {
    check_same_field(x, y);
    return QuadElem(x.a - y.a, x.b - y.b, x.d);
}

QuadElem operator*(const QuadElem& x, const QuadElem& y) {
    check_same_field(x, y);
    return QuadElem(x.a * y.a + Rat(x.d) * x.b * y.b, x.a * y.b + x.b * y.a, x.d);
}

QuadElem operator/(const QuadElem& x, const QuadElem& y) {
    check_same_field(x, y);
    Rat n = y.norm();
    if (n == 0) throw std::invalid_argument("QuadElem: division by zero");
    QuadElem t = x * y.conj();
    return QuadElem(t.a / n, t.b / n, x.d);
}

std::string QuadElem::str() const {
    if (b == 0) return a.get_str();
    std::string s = (a == 0) ? "" : a.get_str();
    std::string bs = b.get_str();
    if (!s.empty() && bs[0] != '-') s += "+";
    return s + bs + "*sqrt(" + d.get_str() + ")";
}

std::optional<Rat> rat_sqrt(const Rat& x) {
    if (x < 0) return std::nullopt;
    if (x == 0) return Rat(0);
    const Int& num = x.get_num();
    const Int& den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rat(rn) / Rat(rd);
}

std::optional<QuadElem> sqrt_in_K(const QuadElem& x) {
    if (x.is_zero()) return QuadElem(Rat(0), Rat(0), x.d);
    if (x.b == 0) {
        if (auto r = rat_sqrt(x.a)) return QuadElem(*r, Rat(0), x.d);
        if (x.d != 1) {
            if (auto r = rat_sqrt(x.a / Rat(x.d))) return QuadElem(Rat(0), *r, x.d);
        }
        return std::nullopt;
    }
    // (e + f sqrt d)^2 = x: e^2 + d f^2 = a, 2ef = b. e^2 is a root of
    // t^2 - a t + d b^2/4, i.e. t = (a +- sqrt(N(x)))/2.
    auto rn = rat_sqrt(x.norm());
    if (!rn) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        Rat t = (x.a + (sign ? -*rn : *rn)) / 2;
        auto e = rat_sqrt(t);
        if (e && *e != 0) {
            Rat f = x.b / (2 * *e);
            QuadElem cand(*e, f, x.d);
            if (cand * cand == x) return cand;
        }
    }
    return std::nullopt;
}

std::optional<long> sqrt_mod_p_scan(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    for (long r = 0; r <= p / 2; ++r)
        if ((r * r) % p == a) return r;
    return std::nullopt;
}

ReductionContext reduction_context(const QuadField& K, long p) {
    SplitType st = splitting_type(K, Int(p));
    if (st == SplitType::INERT) return {p, st, 0};
    if (st == SplitType::RAMIFIED) {
        // odd ramified p divides d, image 0; at p = 2 the image is the parity of d
        long s = (p == 2 && K.d % 2 != 0) ? 1 : 0;
        return {p, st, s};
    }
    Int dm = K.d % p;
    long dml = dm.get_si();
    auto r = sqrt_mod_p_scan(dml, p);
    if (!r) throw std::logic_error("reduction_context: split prime without square root");
    return {p, st, *r};
}

nlohmann::json qelem_to_json(const QuadElem& x) {
    return nlohmann::json{{"a", x.a.get_str()}, {"b", x.b.get_str()}, {"d", x.d.get_si()}};
}

QuadElem qelem_from_json(const nlohmann::json& j) {
    Rat a(j.at("a").get<std::string>());
    Rat b(j.at("b").get<std::string>());
    a.canonicalize();
    b.canonicalize();
    return QuadElem(a, b, Int(j.at("d").get<long>()));
}

}  // namespace tq
