#include "fflab/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace fflab {

namespace {

int first_nonzero(const Point& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].v != 0) return static_cast<int>(i);
    return -1;
}

// Row-reduce in place; returns rank. Rows keep their width.
int row_reduce(const Field& f, std::vector<Point>& rows) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c].v != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        FieldElem s = f.inv(rows[r][c]);
        for (auto& x : rows[r]) x = f.mul(x, s);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c].v == 0) continue;
            FieldElem factor = rows[i][c];
            for (int j = 0; j < ncols; ++j)
                rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
        }
        ++r;
    }
    return r;
}

// Inverse of a square matrix; throws std::domain_error when singular.
std::vector<Point> invert(const Field& f, const std::vector<Point>& mat) {
    const int n = static_cast<int>(mat.size());
    std::vector<Point> aug(n, Point(2 * n, f.zero()));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = mat[i][j];
        aug[i][n + i] = f.one();
    }
    if (row_reduce(f, aug) < n) throw std::domain_error("singular matrix");
    std::vector<Point> out(n, Point(n, f.zero()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return out;
}

}  // namespace

Direction canonical_direction(const Field& f, const Point& v) {
    int piv = first_nonzero(v);
    if (piv < 0) throw std::invalid_argument("canonical_direction: zero vector");
    FieldElem s = f.inv(v[piv]);
    Point out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.mul(v[i], s);
    return {std::move(out), piv};
}

std::vector<Direction> enumerate_directions(const Field& f, int n) {
    if (n < 2) throw std::invalid_argument("enumerate_directions: dimension must be >= 2");
    std::vector<Direction> out;
    for (int piv = 0; piv < n; ++piv) {
        const int free = n - piv - 1;
        std::uint64_t count = 1;
        for (int i = 0; i < free; ++i) count *= f.q();
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Point v(n, f.zero());
            v[piv] = f.one();
            std::uint64_t t = idx;
            for (int i = piv + 1; i < n; ++i) {
                v[i] = f.from_index(t % f.q());
                t /= f.q();
            }
            out.push_back({std::move(v), piv});
        }
    }
    return out;
}

Point line_base_key(const Field& f, const Point& pt, const Direction& d) {
    FieldElem t = pt[d.pivot];
    Point base(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i) base[i] = f.sub(pt[i], f.mul(t, d.vector[i]));
    return base;
}

Line line_through(const Field& f, const Point& pt, const Direction& d) {
    return {d, line_base_key(f, pt, d)};
}

std::vector<Point> points_on_line(const Field& f, const Line& l) {
    std::vector<Point> out;
    out.reserve(f.q());
    for (std::uint64_t i = 0; i < f.q(); ++i) {
        FieldElem t = f.from_index(i);
        Point pt(l.base.size());
        for (std::size_t j = 0; j < l.base.size(); ++j)
            pt[j] = f.add(l.base[j], f.mul(t, l.dir.vector[j]));
        out.push_back(std::move(pt));
    }
    return out;
}

int matrix_rank(const Field& f, std::vector<Point> rows) { return row_reduce(f, rows); }

std::optional<Direction> hyperplane_normal(const Field& f, const std::vector<Point>& rows) {
    if (rows.empty()) return std::nullopt;
    const int n = static_cast<int>(rows[0].size());
    std::vector<Point> work = rows;
    if (row_reduce(f, work) != n - 1) return std::nullopt;
    work.resize(n - 1);
    // One free column; back-substitute a kernel vector.
    std::vector<int> pivot_col(n - 1, -1);
    std::vector<bool> is_pivot(n, false);
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n; ++j)
            if (work[i][j].v != 0) { pivot_col[i] = j; is_pivot[j] = true; break; }
    }
    int free_col = 0;
    while (free_col < n && is_pivot[free_col]) ++free_col;
    Point nu(n, f.zero());
    nu[free_col] = f.one();
    for (int i = 0; i < n - 1; ++i)
        nu[pivot_col[i]] = f.neg(work[i][free_col]);
    return canonical_direction(f, nu);
}

FieldElem dot(const Field& f, const Point& a, const Point& b) {
    FieldElem s = f.zero();
    for (std::size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
    return s;
}

ProjectiveMap build_map_to_infinity(const Field& f, const std::vector<Point>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 2 || static_cast<int>(pts[0].size()) != n)
        throw std::invalid_argument("build_map_to_infinity: need n points in F_q^n");
    // Affine independence: x_2 - x_1, ..., x_n - x_1 must have rank n-1.
    {
        std::vector<Point> diffs;
        for (int i = 1; i < n; ++i) {
            Point d(n);
            for (int j = 0; j < n; ++j) d[j] = f.sub(pts[i][j], pts[0][j]);
            diffs.push_back(std::move(d));
        }
        if (matrix_rank(f, diffs) != n - 1)
            throw std::domain_error("build_map_to_infinity: degenerate configuration");
    }
    // 0 lies on the affine hull H iff [x_1 .. x_n; 1 .. 1] lambda = (0; 1) is solvable.
    auto hull_contains_zero = [&](const std::vector<Point>& xs) {
        std::vector<Point> rows(n + 1, Point(n + 1, f.zero()));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows[i][j] = xs[j][i];
        for (int j = 0; j < n; ++j) rows[n][j] = f.one();
        rows[n][n] = f.one();  // rhs: (0,...,0,1)
        int rank_aug = row_reduce(f, rows);
        std::vector<Point> crows(n + 1, Point(n, f.zero()));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) crows[i][j] = xs[j][i];
        for (int j = 0; j < n; ++j) crows[n][j] = f.one();
        return row_reduce(f, crows) == rank_aug;  // consistent system -> 0 in H
    };
    std::vector<Point> shifted = pts;
    Point tau(n, f.zero());
    if (hull_contains_zero(shifted)) {
        bool found = false;
        std::uint64_t total = 1;
        for (int i = 0; i < n; ++i) total *= f.q();
        for (std::uint64_t idx = 1; idx < total && !found; ++idx) {
            Point t(n, f.zero());
            std::uint64_t v = idx;
            for (int i = 0; i < n; ++i) {
                t[i] = f.from_index(v % f.q());
                v /= f.q();
            }
            std::vector<Point> cand = pts;
            for (auto& pt : cand)
                for (int j = 0; j < n; ++j) pt[j] = f.add(pt[j], t[j]);
            if (!hull_contains_zero(cand)) {
                tau = t;
                shifted = std::move(cand);
                found = true;
            }
        }
        if (!found) throw std::domain_error("build_map_to_infinity: no admissible translation");
    }
    // 0 not on H+tau, so the shifted points are linearly independent.
    // A = X^{-1} maps x_i+tau to e_i; phi = column sums of A is 1 on H+tau.
    std::vector<Point> X(n, Point(n, f.zero()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X[i][j] = shifted[j][i];
    std::vector<Point> A = invert(f, X);
    Point phi(n, f.zero());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) phi[j] = f.add(phi[j], A[i][j]);
    // (v : w) -> (A(v + tau w) : phi(v + tau w) - w)
    ProjectiveMap m;
    m.matrix.assign(n + 1, Point(n + 1, f.zero()));
    for (int i = 0; i < n; ++i) {
        FieldElem last = f.zero();
        for (int j = 0; j < n; ++j) {
            m.matrix[i][j] = A[i][j];
            last = f.add(last, f.mul(A[i][j], tau[j]));
        }
        m.matrix[i][n] = last;
    }
    FieldElem last = f.zero();
    for (int j = 0; j < n; ++j) {
        m.matrix[n][j] = phi[j];
        last = f.add(last, f.mul(phi[j], tau[j]));
    }
    m.matrix[n][n] = f.sub(last, f.one());
    return m;
}

Point apply_homogeneous(const Field& f, const ProjectiveMap& m, const Point& v, FieldElem w) {
    const int n = m.n();
    Point out(n + 1, f.zero());
    for (int i = 0; i <= n; ++i) {
        FieldElem s = f.zero();
        for (int j = 0; j < n; ++j) s = f.add(s, f.mul(m.matrix[i][j], v[j]));
        out[i] = f.add(s, f.mul(m.matrix[i][n], w));
    }
    return out;
}

ProjectedPoint apply_projective(const Field& f, const ProjectiveMap& m, const Point& pt) {
    const int n = m.n();
    Point im = apply_homogeneous(f, m, pt, f.one());
    ProjectedPoint out;
    if (im[n].v == 0) {
        out.at_infinity = true;
        im.resize(n);
        out.infinity = canonical_direction(f, im);
        return out;
    }
    FieldElem winv = f.inv(im[n]);
    out.value.resize(n);
    for (int i = 0; i < n; ++i) out.value[i] = f.mul(im[i], winv);
    return out;
}

std::optional<Line> map_line(const Field& f, const ProjectiveMap& m, const Line& l) {
    const int n = m.n();
    std::vector<Point> affine;
    auto consume = [&](Point hom) {
        if (hom[n].v == 0) return;
        FieldElem winv = f.inv(hom[n]);
        Point pt(n);
        for (int i = 0; i < n; ++i) pt[i] = f.mul(hom[i], winv);
        affine.push_back(std::move(pt));
    };
    for (const Point& pt : points_on_line(f, l)) consume(apply_homogeneous(f, m, pt, f.one()));
    consume(apply_homogeneous(f, m, l.dir.vector, f.zero()));
    if (affine.size() < 2) return std::nullopt;
    Point dv(n);
    for (int i = 0; i < n; ++i) dv[i] = f.sub(affine[1][i], affine[0][i]);
    return line_through(f, affine[0], canonical_direction(f, dv));
}

Point orthogonal_project(const Point& pt, int j1, int j2) {
    if (j1 < 0 || j2 <= j1 || j2 >= static_cast<int>(pt.size()))
        throw std::invalid_argument("orthogonal_project: index out of range");
    return {pt[j1], pt[j2]};
}

}  // namespace fflab
