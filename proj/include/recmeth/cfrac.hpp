#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "recmeth/coeff_sequence.hpp"
#include "recmeth/errors.hpp"
#include "recmeth/jet.hpp"

namespace recmeth {

struct SingularLevel : NonConvergence {
    long level;
    SingularLevel(long lvl, const std::string& what) : NonConvergence(what), level(lvl) {}
};

template <class Real>
using Complex = std::complex<Real>;

// 1/(z - b^2 g)
template <class Real>
Complex<Real> mobius_apply(Complex<Real> z, Real b, Complex<Real> g, long level = 0) {
    const Complex<Real> den = z - b * b * g;
    if (den == Complex<Real>{}) throw SingularLevel(level, "pole at level " + std::to_string(level));
    return Real(1) / den;
}

// True values are p[n] * 2^exponent[n] (same for q).
template <class Real>
struct PolyPair {
    std::vector<Complex<Real>> p, q;
    std::vector<int> exponent;
    std::vector<Real> b;  // b_0..b_{N+1}

    long size() const { return static_cast<long>(p.size()) - 1; }
    Complex<Real> p_value(long n) const { return std::ldexp(Real(1), exponent[n]) * p[n]; }
    Complex<Real> q_value(long n) const { return std::ldexp(Real(1), exponent[n]) * q[n]; }
    // b_{n+1}(q_{n+1} p_n - q_n p_{n+1})
    Complex<Real> wronskian(long n) const {
        const Complex<Real> w = q[n + 1] * p[n] - q[n] * p[n + 1];
        return b[n + 1] * std::ldexp(Real(1), exponent[n] + exponent[n + 1]) * w;
    }
    Complex<Real> ratio(long n) const { return q[n] / p[n]; }
};

template <class Real>
PolyPair<Real> poly_eval(const CoeffSequence& seq, Complex<Real> z, long N) {
    require(N >= 1, "poly_eval needs N >= 1");
    constexpr int kStep = 512;
    const Real big = std::ldexp(Real(1), kStep);
    PolyPair<Real> r;
    r.p.resize(N + 1);
    r.q.resize(N + 1);
    r.exponent.assign(N + 1, 0);
    r.b.resize(N + 2);
    for (long n = 0; n <= N + 1; ++n) r.b[n] = seq.at<Real>(n);
    r.p[0] = 1;
    r.q[0] = 0;
    r.p[1] = z / r.b[1];
    r.q[1] = Real(1) / r.b[1];
    Complex<Real> pm = r.p[0], qm = r.q[0], pc = r.p[1], qc = r.q[1];
    int e = 0;
    for (long n = 1; n < N; ++n) {
        Complex<Real> pn = (z * pc - r.b[n] * pm) / r.b[n + 1];
        Complex<Real> qn = (z * qc - r.b[n] * qm) / r.b[n + 1];
        pm = pc;
        qm = qc;
        pc = pn;
        qc = qn;
        if (std::abs(pc) > big || std::abs(qc) > big) {
            const Real s = std::ldexp(Real(1), -kStep);
            pm *= s;
            qm *= s;
            pc *= s;
            qc *= s;
            e += kStep;
            // keep stored n consistent with the new scale for the Wronskian pair (n, n+1)
            r.p[n] = pm;
            r.q[n] = qm;
            r.exponent[n] = e;
        }
        r.p[n + 1] = pc;
        r.q[n + 1] = qc;
        r.exponent[n + 1] = e;
    }
    return r;
}

// Jets of p_n and q_n at z = 0, advanced one index at a time.
template <class Real>
class JetRecurrence {
public:
    JetRecurrence(const CoeffSequence& seq, int order)
        : seq_(seq), K_(order), pm_(order), pc_(order), qm_(order), qc_(order) {
        require(order >= 0, "jet order must be >= 0");
        b_prev_ = seq.at<Real>(0);
        b_cur_ = seq.at<Real>(1);
        pm_[0] = 1;  // p_0
        pc_ = Jet<Real>(order);
        if (order >= 1) pc_[1] = Real(1) / b_cur_;  // p_1 = z/b_1
        qc_[0] = Real(1) / b_cur_;                   // q_1
        n_ = 1;
    }

    long index() const { return n_; }
    const Jet<Real>& p() const { return pc_; }
    const Jet<Real>& q() const { return qc_; }
    const Jet<Real>& p_prev() const { return pm_; }
    const Jet<Real>& q_prev() const { return qm_; }
    Real b() const { return b_cur_; }

    // n -> n+1
    void step() {
        const Real b_next = seq_.at<Real>(n_ + 1);
        advance(pm_, pc_, b_next);
        advance(qm_, qc_, b_next);
        b_prev_ = b_cur_;
        b_cur_ = b_next;
        ++n_;
        enforce_parity(pc_, n_ % 2);
        enforce_parity(qc_, (n_ + 1) % 2);
    }

private:
    const CoeffSequence& seq_;
    int K_;
    Jet<Real> pm_, pc_, qm_, qc_;
    Real b_prev_{}, b_cur_{};
    long n_ = 0;

    // prev <- cur, cur <- (z cur - b_n prev)/b_{n+1}
    void advance(Jet<Real>& prev, Jet<Real>& cur, Real b_next) {
        for (int k = K_; k >= 0; --k) {
            const Real zc = k >= 1 ? cur[k - 1] : Real(0);
            const Real nv = (zc - b_cur_ * prev[k]) / b_next;
            prev[k] = cur[k];
            cur[k] = nv;
        }
    }
    static void enforce_parity(Jet<Real>& j, long parity) {
        for (int k = 0; k <= j.order(); ++k)
            if (k % 2 != parity) j[k] = Real(0);
    }
};

template <class Real>
struct PolyJets {
    std::vector<Jet<Real>> p, q;  // index 0..N
};

template <class Real>
PolyJets<Real> poly_jets(const CoeffSequence& seq, long N, int K) {
    require(N >= 1, "poly_jets needs N >= 1");
    PolyJets<Real> out;
    JetRecurrence<Real> rec(seq, K);
    out.p.push_back(rec.p_prev());
    out.q.push_back(rec.q_prev());
    out.p.push_back(rec.p());
    out.q.push_back(rec.q());
    while (rec.index() < N) {
        rec.step();
        out.p.push_back(rec.p());
        out.q.push_back(rec.q());
    }
    return out;
}

// q_N/p_N by the stable backward Moebius composition seeded with G^(N) = 0.
template <class Real>
Complex<Real> truncated_green(const CoeffSequence& seq, Complex<Real> z, long N) {
    require(N >= 1, "truncated_green needs N >= 1");
    require(z.imag() != 0, "truncated_green needs Im z != 0");
    Complex<Real> g{};
    for (long n = N - 1; n >= 0; --n) g = mobius_apply(z, seq.at<Real>(n + 1), g, n);
    return g;
}

enum class SeedKind { Leading, FirstOrder };

struct DescentOptions {
    double tol = 1e-10;
    long initial_depth = 0;  // 0 means max(4N, 64)
    long max_depth = 1L << 20;
    SeedKind seed = SeedKind::FirstOrder;
};

template <class Real>
struct DescentResult {
    Complex<Real> value;
    long depth = 0;
    double achieved_tol = 0.0;
};

// Asymptotic seed for G^(M): leading term -sgn(Im z) i / b_M, optionally with the first-order
// correction from the local slope of b.
template <class Real>
Complex<Real> descent_seed(const CoeffSequence& seq, Complex<Real> z, long M, SeedKind kind) {
    const Real sigma = z.imag() < 0 ? Real(1) : Real(-1);
    const Real bM = seq.at<Real>(M);
    const Complex<Real> lead(0, sigma);
    if (kind == SeedKind::Leading) return lead / bM;
    const Real slope = (seq.at<Real>(M + 1) - seq.at<Real>(M - 1)) / Real(2);
    const Complex<Real> c = -(slope + lead * z) / (Real(2) * bM);
    return lead * (Real(1) + c) / bM;
}

template <class Real>
Complex<Real> descend(const CoeffSequence& seq, Complex<Real> z, long M, long N, SeedKind kind) {
    Complex<Real> g = descent_seed(seq, z, M, kind);
    for (long n = M - 1; n >= N; --n) g = mobius_apply(z, seq.at<Real>(n + 1), g, n);
    return g;
}

// G^(N)(z) of the infinite continued fraction by adaptive-depth descent.
template <class Real>
DescentResult<Real> descent_green(const CoeffSequence& seq, Complex<Real> z, long N = 0,
                                  const DescentOptions& opt = {}) {
    require(z.imag() != 0, "descent_green needs Im z != 0");
    require(N >= 0, "descent level must be >= 0");
    long M = opt.initial_depth > 0 ? opt.initial_depth : std::max(4 * N, 64L);
    require(M > N, "descent depth must exceed the target level");
    const auto nmax = seq.n_max();
    auto cap = [&](long m) { return nmax ? std::min(m, *nmax - 1) : m; };
    M = cap(M);
    require(M > N, "tabulated sequence too short for descent");
    Complex<Real> prev = descend(seq, z, M, N, opt.seed);
    for (;;) {
        const long next = cap(2 * M);
        if (next == M || next > opt.max_depth)
            throw NonConvergence("descent did not converge within depth " + std::to_string(M));
        DescentResult<Real> r;
        r.value = descend(seq, z, next, N, opt.seed);
        r.depth = next;
        r.achieved_tol = static_cast<double>(std::abs(r.value - prev));
        if (r.achieved_tol <= opt.tol * static_cast<double>(std::abs(r.value))) return r;
        prev = r.value;
        M = next;
    }
}

template <class Real>
struct CauchyColumn {
    std::vector<Complex<Real>> C;
    bool exact = true;  // false when built from a stitched tail
    long stitch_level = 0;
    double max_imag_violation = 0.0;  // max |Im(i^-(n+1) C_n)| / |C_n|
    double max_sign_violation = 0.0;  // max(-Re(i^-(n+1) C_n)) / |C_n|, >= 0
    bool phase_checked = false;
    bool phase_ok(double tol = 1e-8) const {
        return !phase_checked || (max_imag_violation <= tol && max_sign_violation <= tol);
    }
};

template <class Real>
void check_phase(CauchyColumn<Real>& col, Complex<Real> z) {
    if (z.real() != 0 || z.imag() > 0) return;
    col.phase_checked = true;
    Complex<Real> rot(0, -1);  // i^-(n+1) starting at n = 0
    for (std::size_t n = 0; n < col.C.size(); ++n) {
        const Complex<Real> v = rot * col.C[n];
        const Real mag = std::abs(v);
        if (mag > 0) {
            col.max_imag_violation = std::max(col.max_imag_violation, static_cast<double>(std::fabs(v.imag()) / mag));
            col.max_sign_violation = std::max(col.max_sign_violation, static_cast<double>(-v.real() / mag));
        }
        rot *= Complex<Real>(0, -1);
    }
}

// Forward recurrence from C_0 = G, C_1 = (zG - 1)/b_1.
template <class Real>
CauchyColumn<Real> cauchy_column(const CoeffSequence& seq, Complex<Real> z, long N, Complex<Real> G) {
    require(N >= 1, "cauchy_column needs N >= 1");
    CauchyColumn<Real> col;
    col.C.resize(N + 1);
    col.C[0] = G;
    col.C[1] = (z * G - Real(1)) / seq.at<Real>(1);
    for (long n = 1; n < N; ++n)
        col.C[n + 1] = (z * col.C[n] - seq.at<Real>(n) * col.C[n - 1]) / seq.at<Real>(n + 1);
    check_phase(col, z);
    return col;
}

// C_n = C_{n-1} b_n G^(n), with G^(n) from descent; avoids the forward instability.
template <class Real>
CauchyColumn<Real> cauchy_column_stable(const CoeffSequence& seq, Complex<Real> z, long N,
                                        const DescentOptions& opt = {}) {
    require(N >= 1, "cauchy_column_stable needs N >= 1");
    auto top = descent_green<Real>(seq, z, N, opt);
    CauchyColumn<Real> col;
    col.C.resize(N + 1);
    std::vector<Complex<Real>> g(N + 1);
    g[N] = top.value;
    for (long n = N - 1; n >= 0; --n) g[n] = mobius_apply(z, seq.at<Real>(n + 1), g[n + 1], n);
    col.C[0] = g[0];
    for (long n = 1; n <= N; ++n) col.C[n] = col.C[n - 1] * seq.at<Real>(n) * g[n];
    check_phase(col, z);
    return col;
}

}  // namespace recmeth
