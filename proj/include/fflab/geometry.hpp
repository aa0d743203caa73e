#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

using Point = std::vector<FieldElem>;

/// Canonical projective direction: first nonzero coordinate is 1, everything
/// before it is 0. Two vectors are proportional iff they canonicalize equally.
struct Direction {
    Point vector;
    int pivot = 0;
    auto operator<=>(const Direction&) const = default;
};

/// Canonical line: the base point has coordinate 0 at the direction's pivot,
/// so (dir, base) is a unique key for the q points {base + t*dir}.
struct Line {
    Direction dir;
    Point base;
    auto operator<=>(const Line&) const = default;
};

/// Invertible (n+1)x(n+1) matrix acting on homogeneous coordinates (v : w).
struct ProjectiveMap {
    std::vector<std::vector<FieldElem>> matrix;
    int n() const { return static_cast<int>(matrix.size()) - 1; }
};

/// Affine image of a point, or the direction it was sent to infinity along.
struct ProjectedPoint {
    bool at_infinity = false;
    Point value;        // affine coordinates, valid when !at_infinity
    Direction infinity; // valid when at_infinity
};

Direction canonical_direction(const Field& f, const Point& v);

/// All (q^n - 1)/(q - 1) canonical directions, pivot-major order.
std::vector<Direction> enumerate_directions(const Field& f, int n);

Line line_through(const Field& f, const Point& pt, const Direction& d);

/// Base point of the canonical line through pt in direction d, without
/// materializing the Line. Used as the bucketing key in incidence counts.
Point line_base_key(const Field& f, const Point& pt, const Direction& d);

std::vector<Point> points_on_line(const Field& f, const Line& l);

/// Rank of the row span over F_q.
int matrix_rank(const Field& f, std::vector<Point> rows);

/// For n-1 directions of rank n-1 in F_q^n, the canonical normal of their
/// common hyperplane; nullopt when the rank is deficient.
std::optional<Direction> hyperplane_normal(const Field& f, const std::vector<Point>& rows);

FieldElem dot(const Field& f, const Point& a, const Point& b);

/// Projective map sending the n affinely independent points x_1..x_n to the
/// points at infinity of the n coordinate directions, and their affine hull H
/// to the hyperplane at infinity. If 0 lies on H, a deterministic
/// pre-translation is applied first. Throws on affinely dependent input.
ProjectiveMap build_map_to_infinity(const Field& f, const std::vector<Point>& pts);

ProjectedPoint apply_projective(const Field& f, const ProjectiveMap& m, const Point& pt);

/// Homogeneous action on (v : w); result is reduced but not normalized.
Point apply_homogeneous(const Field& f, const ProjectiveMap& m, const Point& v, FieldElem w);

/// Affine part of the image of a line: nullopt when the whole image lies on
/// the hyperplane at infinity, otherwise the canonical image line.
std::optional<Line> map_line(const Field& f, const ProjectiveMap& m, const Line& l);

/// (pt[j1], pt[j2]) with 0 <= j1 < j2 < n.
Point orthogonal_project(const Point& pt, int j1, int j2);

}  // namespace fflab
