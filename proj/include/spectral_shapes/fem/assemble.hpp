#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <vector>

#include "../error.hpp"
#include "mesh.hpp"

namespace spectral_shapes {

// P1 operators on a triangulation: the Dirichlet energy (stiffness), the
// consistent area mass, and the consistent boundary edge mass supported on
// boundary vertices. Row sums of `mass` integrate 1, so mass.sum() is the
// mesh area and boundary_mass.sum() the mesh perimeter.
struct FemOperators {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    Eigen::SparseMatrix<double> boundary_mass;
    std::vector<int> boundary_vertex;  // ascending, each once
};

inline FemOperators assemble_fem(const TriMesh& mesh) {
    mesh.validate();
    int n = static_cast<int>(mesh.vertex.size());
    std::vector<Eigen::Triplet<double>> ka, ma, ba;
    ka.reserve(mesh.tri.size() * 9);
    ma.reserve(mesh.tri.size() * 9);

    for (size_t ti = 0; ti < mesh.tri.size(); ++ti) {
        auto& t = mesh.tri[ti];
        Complex p0 = mesh.vertex[t[0]], p1 = mesh.vertex[t[1]], p2 = mesh.vertex[t[2]];
        double area = mesh.tri_area(ti);
        // Barycentric gradients: grad lambda_i = (b_i, c_i) / (2 area).
        double b[3] = {p1.imag() - p2.imag(), p2.imag() - p0.imag(),
                       p0.imag() - p1.imag()};
        double c[3] = {p2.real() - p1.real(), p0.real() - p2.real(),
                       p1.real() - p0.real()};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ka.emplace_back(t[i], t[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
                ma.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
            }
    }

    std::vector<int> bset;
    for (auto& e : mesh.boundary) {
        double len = std::abs(mesh.vertex[e[1]] - mesh.vertex[e[0]]);
        ba.emplace_back(e[0], e[0], len / 3.0);
        ba.emplace_back(e[1], e[1], len / 3.0);
        ba.emplace_back(e[0], e[1], len / 6.0);
        ba.emplace_back(e[1], e[0], len / 6.0);
        bset.push_back(e[0]);
        bset.push_back(e[1]);
    }
    std::sort(bset.begin(), bset.end());
    bset.erase(std::unique(bset.begin(), bset.end()), bset.end());

    FemOperators ops;
    ops.stiffness.resize(n, n);
    ops.mass.resize(n, n);
    ops.boundary_mass.resize(n, n);
    ops.stiffness.setFromTriplets(ka.begin(), ka.end());
    ops.mass.setFromTriplets(ma.begin(), ma.end());
    ops.boundary_mass.setFromTriplets(ba.begin(), ba.end());
    ops.stiffness.makeCompressed();
    ops.mass.makeCompressed();
    ops.boundary_mass.makeCompressed();
    ops.boundary_vertex = std::move(bset);
    return ops;
}

}  // namespace spectral_shapes
