#include "bvp/func.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bvp/chebyshev.hpp"
#include "bvp/errors.hpp"

namespace bvp {

namespace {

// Clenshaw on matrix coefficients.
Matrix clenshaw_mat(const std::vector<Matrix>& c, double x, int rows, int cols) {
    Matrix b1 = Matrix::Zero(rows, cols), b2 = Matrix::Zero(rows, cols);
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        Matrix t = c[k] + 2.0 * x * b1 - b2;
        b2 = std::move(b1);
        b1 = std::move(t);
    }
    if (c.empty()) return Matrix::Zero(rows, cols);
    return c[0] + x * b1 - b2;
}

std::vector<Matrix> vals_to_coeffs_mat(const std::vector<Matrix>& vals, int rows, int cols) {
    const size_t N1 = vals.size();
    std::vector<Matrix> out(N1, Matrix::Zero(rows, cols));
    std::vector<cheb::Complex> scratch(N1);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            for (size_t q = 0; q < N1; ++q) scratch[q] = vals[q](i, j);
            auto ck = cheb::vals_to_coeffs(scratch);
            for (size_t q = 0; q < N1; ++q) out[q](i, j) = ck[q];
        }
    return out;
}

}  // namespace

Func Func::constant(Interval dom, const Matrix& value) {
    Func f;
    f.dom_ = dom;
    f.rows_ = static_cast<int>(value.rows());
    f.cols_ = static_cast<int>(value.cols());
    f.kind_ = FuncKind::Chebyshev;
    f.pieces_.push_back({dom.a, dom.b, {value}});
    return f;
}

Func Func::constant(Interval dom, Complex value) {
    Matrix v(1, 1);
    v(0, 0) = value;
    return constant(dom, v);
}

Func Func::chebyshev(Interval dom, std::vector<Matrix> coeffs) {
    if (coeffs.empty()) throw DimensionMismatch("chebyshev: empty coefficient list");
    Func f;
    f.dom_ = dom;
    f.rows_ = static_cast<int>(coeffs[0].rows());
    f.cols_ = static_cast<int>(coeffs[0].cols());
    f.kind_ = FuncKind::Chebyshev;
    for (const auto& c : coeffs)
        if (c.rows() != f.rows_ || c.cols() != f.cols_)
            throw DimensionMismatch("chebyshev: inconsistent coefficient shapes");
    f.pieces_.push_back({dom.a, dom.b, std::move(coeffs)});
    return f;
}

Func Func::step(Interval dom, const std::vector<double>& breaks,
                const std::vector<Matrix>& values) {
    if (breaks.size() < 2 || values.size() + 1 != breaks.size())
        throw InvalidPartition("step: need N+1 breakpoints for N values");
    if (breaks.front() != dom.a || breaks.back() != dom.b)
        throw InvalidPartition("step: breakpoints must span [a,b]");
    for (size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) throw InvalidPartition("step: breakpoints not increasing");
    Func f;
    f.dom_ = dom;
    f.rows_ = static_cast<int>(values[0].rows());
    f.cols_ = static_cast<int>(values[0].cols());
    f.kind_ = FuncKind::Step;
    for (size_t i = 0; i < values.size(); ++i)
        f.pieces_.push_back({breaks[i], breaks[i + 1], {values[i]}});
    return f;
}

Func Func::from_callable(Interval dom, int rows, int cols,
                         const std::function<Matrix(double)>& fn, int degree,
                         const std::vector<double>& interior_breaks) {
    std::vector<double> breaks{dom.a};
    for (double t : interior_breaks)
        if (t > dom.a && t < dom.b) breaks.push_back(t);
    breaks.push_back(dom.b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    Func f;
    f.dom_ = dom;
    f.rows_ = rows;
    f.cols_ = cols;
    f.kind_ = breaks.size() > 2 ? FuncKind::Piecewise : FuncKind::Chebyshev;
    auto x = cheb::lobatto_points(std::max(degree, 1));
    for (size_t pi = 0; pi + 1 < breaks.size(); ++pi) {
        double lo = breaks[pi], hi = breaks[pi + 1];
        std::vector<Matrix> vals(x.size());
        for (size_t j = 0; j < x.size(); ++j)
            vals[j] = fn(0.5 * ((hi - lo) * x[j] + lo + hi));
        f.pieces_.push_back({lo, hi, vals_to_coeffs_mat(vals, rows, cols)});
    }
    return f;
}

Func Func::from_scalar(Interval dom, const std::function<double(double)>& fn, int degree) {
    return from_callable(dom, 1, 1,
                         [&fn](double t) {
                             Matrix v(1, 1);
                             v(0, 0) = Complex(fn(t), 0.0);
                             return v;
                         },
                         degree);
}

Func Func::from_samples(Interval dom, const std::vector<double>& breaks,
                        const std::vector<std::vector<Matrix>>& piece_samples) {
    if (breaks.size() < 2 || piece_samples.size() + 1 != breaks.size())
        throw InvalidPartition("from_samples: breaks/pieces mismatch");
    Func f;
    f.dom_ = dom;
    f.rows_ = static_cast<int>(piece_samples[0][0].rows());
    f.cols_ = static_cast<int>(piece_samples[0][0].cols());
    f.kind_ = breaks.size() > 2 ? FuncKind::Piecewise : FuncKind::Chebyshev;
    for (size_t p = 0; p + 1 < breaks.size(); ++p)
        f.pieces_.push_back({breaks[p], breaks[p + 1],
                             vals_to_coeffs_mat(piece_samples[p], f.rows_, f.cols_)});
    return f;
}

int Func::max_degree() const {
    int d = 0;
    for (const auto& p : pieces_) d = std::max(d, static_cast<int>(p.c.size()) - 1);
    return d;
}

std::vector<double> Func::breakpoints() const {
    std::vector<double> b;
    b.reserve(pieces_.size() + 1);
    for (const auto& p : pieces_) b.push_back(p.lo);
    b.push_back(pieces_.back().hi);
    return b;
}

Interval Func::piece_interval(int i) const {
    return Interval{pieces_.at(i).lo, pieces_.at(i).hi};
}

const std::vector<Matrix>& Func::piece_coeffs(int i) const { return pieces_.at(i).c; }

Func Func::with_rough_flag(bool rough) const {
    Func f = *this;
    f.rough_ = rough;
    return f;
}

const Func::Piece& Func::piece_at(double t) const {
    if (!dom_.contains(t)) throw PointOutOfInterval("Func evaluation outside [a,b]");
    // right-continuous: piece with lo <= t < hi; t = b falls in the last piece
    for (size_t i = 0; i + 1 < pieces_.size(); ++i)
        if (t < pieces_[i].hi) return pieces_[i];
    return pieces_.back();
}

Matrix Func::operator()(double t) const {
    const Piece& p = piece_at(t);
    double x = (2.0 * t - p.lo - p.hi) / (p.hi - p.lo);
    x = std::clamp(x, -1.0, 1.0);
    return clenshaw_mat(p.c, x, rows_, cols_);
}

Complex Func::eval_scalar(double t) const {
    if (rows_ != 1 || cols_ != 1) throw DimensionMismatch("eval_scalar on non-scalar Func");
    return (*this)(t)(0, 0);
}

Func Func::derivative(int order) const {
    if (order < 0) throw UnsupportedDerivative("negative derivative order");
    if (order == 0) return *this;
    if (kind_ == FuncKind::Step)
        throw UnsupportedDerivative("step functions are integral kernels only");
    Func f = *this;
    for (auto& p : f.pieces_) {
        double scale = 2.0 / (p.hi - p.lo);
        for (int o = 0; o < order; ++o) {
            std::vector<cheb::Complex> scratch(p.c.size());
            std::vector<Matrix> out(std::max<size_t>(p.c.size() - 1, 1),
                                    Matrix::Zero(rows_, cols_));
            for (int i = 0; i < rows_; ++i)
                for (int j = 0; j < cols_; ++j) {
                    for (size_t q = 0; q < p.c.size(); ++q) scratch[q] = p.c[q](i, j);
                    auto d = cheb::derivative(scratch);
                    for (size_t q = 0; q < d.size(); ++q) out[q](i, j) = scale * d[q];
                }
            p.c = std::move(out);
        }
    }
    return f;
}

Matrix Func::integrate() const {
    Matrix acc = Matrix::Zero(rows_, cols_);
    for (const auto& p : pieces_) {
        double half = 0.5 * (p.hi - p.lo);
        for (size_t k = 0; k < p.c.size(); k += 2)
            acc += half * (2.0 / (1.0 - static_cast<double>(k) * k)) * p.c[k];
    }
    return acc;
}

Matrix Func::integrate_to(double t) const {
    if (!dom_.contains(t)) throw PointOutOfInterval("integrate_to outside [a,b]");
    Matrix acc = Matrix::Zero(rows_, cols_);
    std::vector<cheb::Complex> scratch;
    for (const auto& p : pieces_) {
        if (t <= p.lo) break;
        double hi = std::min(t, p.hi);
        double half = 0.5 * (p.hi - p.lo);
        if (hi >= p.hi) {
            for (size_t k = 0; k < p.c.size(); k += 2)
                acc += half * (2.0 / (1.0 - static_cast<double>(k) * k)) * p.c[k];
        } else {
            double x = (2.0 * hi - p.lo - p.hi) / (p.hi - p.lo);
            scratch.resize(p.c.size());
            for (int i = 0; i < rows_; ++i)
                for (int j = 0; j < cols_; ++j) {
                    for (size_t q = 0; q < p.c.size(); ++q) scratch[q] = p.c[q](i, j);
                    auto F = cheb::antiderivative(scratch);
                    acc(i, j) += half * cheb::clenshaw(F, x);
                }
        }
    }
    return acc;
}

double Func::lp_norm(double p, double quad_tol) const {
    if (p < 1.0) throw InvalidExponent("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        int grid = std::max(2048, 16 * max_degree());
        return sup_norm(grid);
    }
    double total = 0.0;
    for (const auto& piece : pieces_) {
        double half = 0.5 * (piece.hi - piece.lo);
        auto sample_sum = [&](int N) {
            // Clenshaw-Curtis on sum_ij |f_ij|^p over this piece
            auto x = cheb::lobatto_points(N);
            std::vector<cheb::Complex> g(x.size());
            for (size_t j = 0; j < x.size(); ++j) {
                Matrix v = clenshaw_mat(piece.c, x[j], rows_, cols_);
                double s = 0.0;
                for (int ii = 0; ii < rows_; ++ii)
                    for (int jj = 0; jj < cols_; ++jj) s += std::pow(std::abs(v(ii, jj)), p);
                g[j] = Complex(s, 0.0);
            }
            return half * cheb::integrate(cheb::vals_to_coeffs(g)).real();
        };
        int N = std::max(32, 2 * (static_cast<int>(piece.c.size()) - 1));
        double prev = sample_sum(N);
        for (int iter = 0; iter < 8; ++iter) {
            N *= 2;
            double cur = sample_sum(N);
            if (std::abs(cur - prev) <= quad_tol * std::max(1.0, std::abs(cur)) || N > 8192) {
                prev = cur;
                break;
            }
            prev = cur;
        }
        total += std::max(prev, 0.0);
    }
    return std::pow(total, 1.0 / p);
}

double Func::sup_norm(int grid) const {
    if (grid <= 0) grid = std::max(512, 8 * max_degree());
    double best = 0.0;
    int per_piece = std::max(8, grid / static_cast<int>(pieces_.size()));
    for (const auto& piece : pieces_) {
        auto x = cheb::lobatto_points(per_piece);
        for (double xi : x) {
            Matrix v = clenshaw_mat(piece.c, xi, rows_, cols_);
            best = std::max(best, v.cwiseAbs().maxCoeff());
        }
    }
    return best;
}

double Func::sobolev_norm(int k, double p, double quad_tol) const {
    double s = 0.0;
    for (int ord = 0; ord <= k; ++ord) s += derivative(ord).lp_norm(p, quad_tol);
    return s;
}

Func Func::project_chebyshev(int degree) const {
    if (degree < 0) throw DimensionMismatch("project_chebyshev: negative degree");
    if (kind_ == FuncKind::Chebyshev && pieces_.size() == 1) {
        Func f = *this;
        auto& c = f.pieces_[0].c;
        if (static_cast<int>(c.size()) > degree + 1) c.resize(degree + 1);
        return f;
    }
    // piecewise input: Chebyshev-Gauss quadrature of the projection integrals
    int M = std::max({4 * (degree + 1), 4 * (max_degree() + 1), 512});
    auto x = cheb::gauss_points(M);
    std::vector<Matrix> vals(M);
    for (int i = 0; i < M; ++i) vals[i] = (*this)(dom_.from_unit(x[i]));
    std::vector<Matrix> c(degree + 1, Matrix::Zero(rows_, cols_));
    constexpr double kPi = 3.14159265358979323846;
    for (int k = 0; k <= degree; ++k) {
        Matrix acc = Matrix::Zero(rows_, cols_);
        for (int i = 0; i < M; ++i) {
            double phi = kPi * (2 * (M - 1 - i) + 1) / (2.0 * M);  // x ascending
            acc += vals[i] * std::cos(k * phi);
        }
        c[k] = acc * ((k == 0 ? 1.0 : 2.0) / M);
    }
    return chebyshev(dom_, std::move(c));
}

Func::Piece Func::restrict_piece(const Piece& p, double lo, double hi, int rows, int cols) {
    if (lo == p.lo && hi == p.hi) return p;
    int deg = std::max<int>(static_cast<int>(p.c.size()) - 1, 1);
    auto x = cheb::lobatto_points(deg);
    std::vector<Matrix> vals(x.size());
    for (size_t j = 0; j < x.size(); ++j) {
        double t = 0.5 * ((hi - lo) * x[j] + lo + hi);
        double xp = (2.0 * t - p.lo - p.hi) / (p.hi - p.lo);
        vals[j] = clenshaw_mat(p.c, xp, rows, cols);
    }
    return {lo, hi, vals_to_coeffs_mat(vals, rows, cols)};
}

Func Func::refined(const std::vector<double>& breaks) const {
    Func f;
    f.dom_ = dom_;
    f.rows_ = rows_;
    f.cols_ = cols_;
    f.kind_ = kind_;
    f.rough_ = rough_;
    size_t src = 0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double lo = breaks[i], hi = breaks[i + 1];
        while (src + 1 < pieces_.size() && pieces_[src].hi <= lo + 1e-15 * dom_.length()) ++src;
        f.pieces_.push_back(restrict_piece(pieces_[src], lo, hi, rows_, cols_));
    }
    return f;
}

namespace {
std::vector<double> union_breaks(const Func& f, const Func& g) {
    auto bf = f.breakpoints();
    auto bg = g.breakpoints();
    std::vector<double> all;
    all.insert(all.end(), bf.begin(), bf.end());
    all.insert(all.end(), bg.begin(), bg.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    double tol = 1e-14 * (all.back() - all.front() + 1.0);
    for (double t : all)
        if (out.empty() || t - out.back() > tol) out.push_back(t);
    return out;
}
}  // namespace

Func binary_add(const Func& f, const Func& g, double sign) {
    if (f.rows_ != g.rows_ || f.cols_ != g.cols_ || !(f.dom_ == g.dom_))
        throw DimensionMismatch("Func addition: incompatible shapes or domains");
    auto breaks = union_breaks(f, g);
    Func a = f.refined(breaks), b = g.refined(breaks);
    for (size_t i = 0; i < a.pieces_.size(); ++i) {
        auto& pa = a.pieces_[i].c;
        auto& pb = b.pieces_[i].c;
        if (pa.size() < pb.size()) pa.resize(pb.size(), Matrix::Zero(f.rows_, f.cols_));
        for (size_t k = 0; k < pb.size(); ++k) pa[k] += sign * pb[k];
    }
    if (a.pieces_.size() > 1 && a.kind_ == FuncKind::Chebyshev) a.kind_ = FuncKind::Piecewise;
    if (g.kind_ == FuncKind::Step && f.kind_ == FuncKind::Step) a.kind_ = FuncKind::Step;
    else if (g.kind_ != FuncKind::Chebyshev || f.kind_ != FuncKind::Chebyshev)
        if (a.pieces_.size() > 1) a.kind_ = FuncKind::Piecewise;
    a.rough_ = f.rough_ || g.rough_;
    return a;
}

Func Func::operator+(const Func& g) const { return binary_add(*this, g, 1.0); }
Func Func::operator-(const Func& g) const { return binary_add(*this, g, -1.0); }

Func Func::operator*(Complex s) const {
    Func f = *this;
    for (auto& p : f.pieces_)
        for (auto& c : p.c) c *= s;
    return f;
}

Func Func::matmul(const Func& g) const {
    if (cols_ != g.rows_ || !(dom_ == g.dom_))
        throw DimensionMismatch("Func matmul: incompatible shapes or domains");
    auto breaks = union_breaks(*this, g);
    Func a = refined(breaks), b = g.refined(breaks);
    Func out;
    out.dom_ = dom_;
    out.rows_ = rows_;
    out.cols_ = g.cols_;
    out.kind_ = (breaks.size() > 2) ? FuncKind::Piecewise : FuncKind::Chebyshev;
    out.rough_ = rough_ || g.rough_;
    for (size_t i = 0; i < a.pieces_.size(); ++i) {
        const auto& pa = a.pieces_[i];
        const auto& pb = b.pieces_[i];
        int deg = static_cast<int>(pa.c.size() + pb.c.size()) - 2;
        deg = std::max(deg, 1);
        auto x = cheb::lobatto_points(deg);
        std::vector<Matrix> vals(x.size());
        for (size_t j = 0; j < x.size(); ++j)
            vals[j] = clenshaw_mat(pa.c, x[j], rows_, cols_) *
                      clenshaw_mat(pb.c, x[j], g.rows_, g.cols_);
        out.pieces_.push_back({pa.lo, pa.hi, vals_to_coeffs_mat(vals, out.rows_, out.cols_)});
    }
    return out;
}

Func Func::col(int j) const {
    if (j < 0 || j >= cols_) throw DimensionMismatch("Func::col out of range");
    Func f;
    f.dom_ = dom_;
    f.rows_ = rows_;
    f.cols_ = 1;
    f.kind_ = kind_;
    f.rough_ = rough_;
    for (const auto& p : pieces_) {
        std::vector<Matrix> c;
        c.reserve(p.c.size());
        for (const auto& ck : p.c) c.push_back(ck.col(j));
        f.pieces_.push_back({p.lo, p.hi, std::move(c)});
    }
    return f;
}

Func Func::hcat(const std::vector<Func>& parts) {
    if (parts.empty()) throw DimensionMismatch("hcat: empty");
    std::vector<double> all;
    for (const auto& f : parts) {
        auto b = f.breakpoints();
        all.insert(all.end(), b.begin(), b.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<double> breaks;
    double tol = 1e-14 * (all.back() - all.front() + 1.0);
    for (double t : all)
        if (breaks.empty() || t - breaks.back() > tol) breaks.push_back(t);
    int rows = parts[0].rows_;
    int cols = 0;
    for (const auto& f : parts) cols += f.cols_;
    Func out;
    out.dom_ = parts[0].dom_;
    out.rows_ = rows;
    out.cols_ = cols;
    out.kind_ = breaks.size() > 2 ? FuncKind::Piecewise : FuncKind::Chebyshev;
    std::vector<Func> ref;
    ref.reserve(parts.size());
    size_t maxc = 0;
    for (const auto& f : parts) {
        ref.push_back(f.refined(breaks));
        out.rough_ = out.rough_ || f.rough_;
    }
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        maxc = 0;
        for (const auto& f : ref) maxc = std::max(maxc, f.pieces_[i].c.size());
        std::vector<Matrix> c(maxc, Matrix::Zero(rows, cols));
        int c0 = 0;
        for (const auto& f : ref) {
            for (size_t k = 0; k < f.pieces_[i].c.size(); ++k)
                c[k].block(0, c0, rows, f.cols_) = f.pieces_[i].c[k];
            c0 += f.cols_;
        }
        out.pieces_.push_back({breaks[i], breaks[i + 1], std::move(c)});
    }
    return out;
}

}  // namespace bvp
