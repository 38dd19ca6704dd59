#include "tq/ffield.hpp"

namespace tq {

static long mod_pos(long v, long p) {
    v %= p;
    return v < 0 ? v + p : v;
}

static long pow_mod(long base, long long e, long p) {
    long long r = 1, b = mod_pos(base, p);
    while (e > 0) {
        if (e & 1) r = (r * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return (long)r;
}

long smallest_nonresidue(long p) {
    if (p == 2) throw std::invalid_argument("smallest_nonresidue: p = 2 unsupported");
    for (long t = 2; t < p; ++t)
        if (pow_mod(t, (p - 1) / 2, p) == p - 1) return t;
    throw std::logic_error("smallest_nonresidue: none found");
}

Fq Fq::fp(long p, long v) { return Fq{mod_pos(v, p), 0, p, 0, 1}; }

Fq Fq::fp2(long p, long a, long b) {
    return Fq{mod_pos(a, p), mod_pos(b, p), p, smallest_nonresidue(p), 2};
}

static void check_compat(const Fq& x, const Fq& y) {
    if (x.p != y.p || x.deg != y.deg) throw std::invalid_argument("Fq: field mismatch");
}

Fq operator+(const Fq& x, const Fq& y) {
    check_compat(x, y);
    return Fq{mod_pos(x.a + y.a, x.p), mod_pos(x.b + y.b, x.p), x.p, x.t, x.deg};
}

Fq operator-(const Fq& x, const Fq& y) {
    check_compat(x, y);
    return Fq{mod_pos(x.a - y.a, x.p), mod_pos(x.b - y.b, x.p), x.p, x.t, x.deg};
}

Fq operator-(const Fq& x) {
    return Fq{mod_pos(-x.a, x.p), mod_pos(-x.b, x.p), x.p, x.t, x.deg};
}

Fq operator*(const Fq& x, const Fq& y) {
    check_compat(x, y);
    long p = x.p;
    if (x.deg == 1) return Fq{(long)(((long long)x.a * y.a) % p), 0, p, 0, 1};
    // (a1 + b1 w)(a2 + b2 w) = a1 a2 + t b1 b2 + (a1 b2 + b1 a2) w
    long long a = ((long long)x.a * y.a + (long long)x.t % p * (((long long)x.b * y.b) % p)) % p;
    long long b = ((long long)x.a * y.b + (long long)x.b * y.a) % p;
    return Fq{mod_pos((long)a, p), mod_pos((long)b, p), p, x.t, 2};
}

Fq fq_pow(Fq x, long long e) {
    Fq r = fq_from_int(x, 1);
    while (e > 0) {
        if (e & 1) r = r * x;
        x = x * x;
        e >>= 1;
    }
    return r;
}

Fq fq_inv(const Fq& x) {
    if (x.is_zero()) throw std::invalid_argument("Fq: inverse of zero");
    long long q = x.q();
    return fq_pow(x, q - 2);
}

Fq operator/(const Fq& x, const Fq& y) { return x * fq_inv(y); }

Fq fq_frobenius(const Fq& x) {
    if (x.deg == 1) return x;
    // w^p = t^((p-1)/2) w = -w since t is a non-residue
    return Fq{x.a, mod_pos(-x.b, x.p), x.p, x.t, 2};
}

int fq_chi(const Fq& x) {
    if (x.is_zero()) return 0;
    long long q = x.q();
    Fq r = fq_pow(x, (q - 1) / 2);
    return (r.a == 1 && r.b == 0) ? 1 : -1;
}

static Fq canonical_root(const Fq& r) {
    Fq n = -r;
    if (r.b != n.b) return r.b < n.b ? r : n;
    return r.a <= n.a ? r : n;
}

std::optional<Fq> fq_sqrt(const Fq& x) {
    if (x.is_zero()) return fq_zero_like(x);
    if (fq_chi(x) == -1) return std::nullopt;
    long long q = x.q();
    long long m = q - 1;
    int s = 0;
    while (m % 2 == 0) { m /= 2; ++s; }
    // deterministic non-residue of the ambient field
    Fq z = fq_zero_like(x);
    if (x.deg == 1) {
        z = Fq::fp(x.p, smallest_nonresidue(x.p));
    } else {
        bool found = false;
        for (long b = 1; b < x.p && !found; ++b)
            for (long a = 0; a < x.p && !found; ++a) {
                Fq c = Fq{a, b, x.p, x.t, 2};
                if (fq_chi(c) == -1) { z = c; found = true; }
            }
        if (!found) throw std::logic_error("fq_sqrt: no non-residue found");
    }
    Fq c = fq_pow(z, m);
    Fq r = fq_pow(x, (m + 1) / 2);
    Fq u = fq_pow(x, m);
    int e = s;
    Fq one = fq_from_int(x, 1);
    while (!(u == one)) {
        int i = 0;
        Fq v = u;
        while (!(v == one)) { v = v * v; ++i; }
        Fq bpow = c;
        for (int j = 0; j < e - i - 1; ++j) bpow = bpow * bpow;
        r = r * bpow;
        c = bpow * bpow;
        u = u * c;
        e = i;
    }
    return canonical_root(r);
}

std::optional<long> sqrt_mod_p(long a, long p) {
    auto r = fq_sqrt(Fq::fp(p, a));
    if (!r) return std::nullopt;
    return r->a;
}

std::vector<Fq> fq_all(const Fq& sample) {
    std::vector<Fq> out;
    if (sample.deg == 1) {
        out.reserve(sample.p);
        for (long a = 0; a < sample.p; ++a) out.push_back(Fq::fp(sample.p, a));
    } else {
        out.reserve(sample.p * sample.p);
        for (long b = 0; b < sample.p; ++b)
            for (long a = 0; a < sample.p; ++a)
                out.push_back(Fq{a, b, sample.p, sample.t, 2});
    }
    return out;
}

Fq fq_zero_like(const Fq& x) { return Fq{0, 0, x.p, x.t, x.deg}; }

Fq fq_from_int(const Fq& sample, long v) {
    return Fq{mod_pos(v, sample.p), 0, sample.p, sample.t, sample.deg};
}

}  // namespace tq
