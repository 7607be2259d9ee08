#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace toricale {

// Dense univariate polynomial, coefficients in increasing degree.
// T must be a commutative ring with T(0), T(1); division needs a field.
template <class T> struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
    static Poly monomial(const T& v, std::size_t deg) {
        std::vector<T> cs(deg + 1, T(0));
        cs[deg] = v;
        return Poly(std::move(cs));
    }
    // x - root
    static Poly linear_root(const T& root) { return Poly(std::vector<T>{T(-root), T(1)}); }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    T coeff(std::size_t k) const { return k < c.size() ? c[k] : T(0); }
    T leading() const { return c.empty() ? T(0) : c.back(); }

    template <class S> S operator()(const S& x) const {
        S acc = S(0);
        for (std::size_t k = c.size(); k-- > 0;) acc = S(acc * x + S(c[k]));
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = T(c[k] * T(static_cast<long>(k)));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> s(std::max(a.c.size(), b.c.size()), T(0));
        for (std::size_t k = 0; k < a.c.size(); ++k) s[k] = T(s[k] + a.c[k]);
        for (std::size_t k = 0; k < b.c.size(); ++k) s[k] = T(s[k] + b.c[k]);
        return Poly(std::move(s));
    }
    friend Poly operator-(const Poly& a) {
        std::vector<T> s(a.c.size());
        for (std::size_t k = 0; k < a.c.size(); ++k) s[k] = T(-a.c[k]);
        return Poly(std::move(s));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c.empty() || b.c.empty()) return Poly();
        std::vector<T> s(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) s[i + j] = T(s[i + j] + a.c[i] * b.c[j]);
        return Poly(std::move(s));
    }
    friend Poly operator*(const T& k, const Poly& a) { return Poly::constant(k) * a; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned e) const {
        Poly out = Poly::constant(T(1));
        for (unsigned i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    // Euclidean division over a field: *this = q * d + r.
    void divmod(const Poly& d, Poly& q, Poly& r) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        r = *this;
        std::vector<T> qs(c.size() >= d.c.size() ? c.size() - d.c.size() + 1 : 0, T(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            T f = T(r.leading() / d.leading());
            qs[shift] = f;
            r = r - Poly::monomial(f, shift) * d;
        }
        q = Poly(std::move(qs));
    }

    template <class S> Poly<S> cast() const {
        std::vector<S> out;
        out.reserve(c.size());
        for (const auto& v : c) out.push_back(static_cast<S>(to_scalar<S>(v)));
        return Poly<S>(std::move(out));
    }

private:
    template <class S> static S to_scalar(const T& v) {
        if constexpr (std::is_same_v<S, double> && !std::is_same_v<T, double>)
            return v.get_d();
        else
            return S(v);
    }
};

} // namespace toricale
