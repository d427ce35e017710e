#include "mcd/charpoly.hpp"

#include "mcd/error.hpp"

namespace mcd {

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational eval(const QPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<int>(k));
    trim(d);
    return d;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.empty()) throw Error("polynomial division by zero");
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational c = r.back() / b.back();
        q[shift] = c;
        for (std::size_t k = 0; k < b.size(); ++k) r[shift + k] -= c * b[k];
        r.pop_back();
        trim(r);
    }
    trim(q);
}

QPoly gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

QPoly squarefree_part(const QPoly& p) {
    QPoly g = gcd(p, derivative(p));
    if (degree(g) <= 0) return p;
    QPoly q, r;
    divmod(p, g, q, r);
    return q;
}

QPoly characteristic_polynomial(const std::vector<std::vector<BigInt>>& a) {
    const std::size_t n = a.size();
    std::vector<BigInt> c(n + 1, BigInt(0));
    c[n] = 1;
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        std::vector<std::vector<BigInt>> next(n, std::vector<BigInt>(n, BigInt(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (a[i][l] != 0)
                    for (std::size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        m.swap(next);
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        if (tr % static_cast<long>(k) != 0) throw ConsistencyError("Faddeev-LeVerrier: inexact division");
        c[n - k] = -tr / static_cast<long>(k);
    }
    QPoly p;
    for (const auto& x : c) p.push_back(Rational(x));
    trim(p);
    return p;
}

namespace {

int sign(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

int count_variations(const std::vector<int>& signs) {
    int prev = 0, v = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

}  // namespace

SturmChain::SturmChain(const QPoly& p) {
    QPoly a = p;
    trim(a);
    if (a.empty()) throw Error("Sturm chain of the zero polynomial");
    seq_.push_back(a);
    QPoly b = derivative(a);
    while (!b.empty()) {
        seq_.push_back(b);
        QPoly q, r;
        divmod(seq_[seq_.size() - 2], b, q, r);
        for (auto& x : r) x = -x;
        b = r;
    }
}

int SturmChain::variations(const Rational& x) const {
    std::vector<int> s;
    for (const auto& p : seq_) s.push_back(sign(eval(p, x)));
    return count_variations(s);
}

int SturmChain::variations_at_plus_infinity() const {
    std::vector<int> s;
    for (const auto& p : seq_) s.push_back(sign(p.back()));
    return count_variations(s);
}

int SturmChain::count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

int SturmChain::count_above(const Rational& a) const { return variations(a) - variations_at_plus_infinity(); }

bool largest_real_root(const QPoly& p, Rational lo, Rational hi, const Rational& tol, Rational& root) {
    QPoly q = squarefree_part(p);
    if (degree(q) < 1) return false;
    SturmChain chain(q);
    if (chain.count(lo, hi) == 0) return false;
    if (eval(q, hi) == 0) {
        root = hi;
        return true;
    }
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (chain.count(mid, hi) > 0)
            lo = mid;
        else
            hi = mid;
    }
    root = hi;
    return true;
}

}  // namespace mcd
