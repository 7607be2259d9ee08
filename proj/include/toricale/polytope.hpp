#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "toricale/rational.hpp"
#include "toricale/weights.hpp"

namespace toricale {

// Facet {L = 0} of the open region {L > 0}, L(x) = <coeffs, x> + offset.
// normal is the weighted inward normal, a positive multiple of coeffs.
struct Facet {
    QVec normal;
    QVec coeffs;
    Rational offset;
    std::string label;

    Rational eval(const QVec& x) const;
};

struct LabelledPolytope {
    std::size_t dim = 0;
    std::vector<Facet> facets;
    bool bounded = false;
    QVec interior_point;

    bool contains(const QVec& x) const; // strict interior
};

// Coordinates are ordered by group: (x~^0_1..x~^0_l ; x~^1_1..x~^1_{n_1} ; ...).
// Group j contributes n_j + 1 coordinates, each with normal (c/a_j) e.
// With cone = true the Sigma facet is dropped.
LabelledPolytope wps_polytope(const GroupedWeights& g, bool cone = false);

// The l-dimensional base region {x_j > 0, sum x_j > 1} with normals
// (c/a_j) e_j and (c/a_0) sum e.
LabelledPolytope base_polytope(const GroupedWeights& g);

// Group index (0-based) of each coordinate of wps_polytope.
std::vector<std::size_t> coordinate_groups(const GroupedWeights& g);

QVec facet_distance(const LabelledPolytope& p, const QVec& x);
std::vector<double> facet_distance(const LabelledPolytope& p, const std::vector<double>& x);

// Exact vertices of the closure; only meaningful when vertices exist.
std::vector<QVec> vertices(const LabelledPolytope& p);

// Every vertex lies on exactly dim facets whose normals are independent.
bool is_simple(const LabelledPolytope& p, std::string* why = nullptr);

nlohmann::json to_json(const LabelledPolytope& p);

using IMatrix = std::vector<std::vector<Integer>>;

struct Lattice {
    std::vector<QVec> generators; // rows, ambient coordinates
    std::size_t dim() const { return generators.empty() ? 0 : generators.front().size(); }
};

Lattice standard_lattice(std::size_t d);
// Lattice generated by the facet normals.
Lattice normal_lattice(const LabelledPolytope& p);

// Row Hermite normal form; zero rows dropped.
IMatrix hermite_normal_form(IMatrix rows);

std::size_t rank(const std::vector<QVec>& rows);
Rational determinant(std::vector<QVec> m);

// [super : sub]. Throws InvalidInput on rank deficiency or when sub is not contained in super.
Integer lattice_index(const Lattice& sub, const Lattice& super);

// gcd of all maximal minors of an integer generator matrix; an independent
// route to the index of the generated lattice in Z^d.
Integer gcd_of_maximal_minors(const IMatrix& rows);

} // namespace toricale
