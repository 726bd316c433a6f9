#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace spectral_shapes {

namespace corpus_detail {

inline DomainSpec polymap(std::string id, std::vector<Complex> coeff) {
    DomainSpec d;
    d.id = std::move(id);
    d.kind = DomainSpec::Kind::Polymap;
    d.map.emplace(std::move(coeff));
    return d;
}

inline DomainSpec polygon(std::string id, DomainFamily family, double h) {
    DomainSpec d;
    d.id = std::move(id);
    d.kind = DomainSpec::Kind::Polygon;
    d.family = family;
    d.mesh_h = h;
    return d;
}

}  // namespace corpus_detail

// Built-in audit corpus. Every polynomial map is univalent on the closed
// disk: sum_{k>=2} k|c_k| < |c_1| holds for each coefficient list, so the
// derivative cannot vanish and the image is a Jordan domain.
inline std::vector<DomainSpec> default_corpus(double mesh_h = 0.05) {
    using corpus_detail::polymap;
    using corpus_detail::polygon;
    const Complex z0(0.0, 0.0);
    std::vector<DomainSpec> out;
    out.push_back(polymap("identity", {z0, {1.0, 0.0}}));
    out.push_back(polymap("cardioid_mild", {z0, {1.0, 0.0}, {0.25, 0.0}}));
    out.push_back(polymap("trefoil_mild", {z0, {1.0, 0.0}, z0, {0.2, 0.0}}));
    out.push_back(polymap("mixed_23", {z0, {1.0, 0.0}, {0.15, 0.0}, {0.1, 0.0}}));
    out.push_back(polymap("scaled_cardioid", {z0, {1.3, 0.0}, {0.2, 0.0}}));
    out.push_back(polymap("tilted_cardioid", {z0, {1.0, 0.0}, {0.1, 0.15}}));
    out.push_back(polymap("four_lobe", {z0, {1.0, 0.0}, z0, z0, {0.12, 0.0}}));
    out.push_back(polymap("mixed_234",
                          {z0, {1.0, 0.0}, {0.1, 0.0}, {0.05, 0.0}, {0.05, 0.0}}));
    out.push_back(polymap("shrunk_wobble", {z0, {0.8, 0.0}, {0.1, 0.0}, {-0.08, 0.0}}));
    out.push_back(polymap("five_lobe_complex",
                          {z0, {1.0, 0.0}, z0, {0.05, -0.1}, z0, {0.04, 0.03}}));
    out.push_back(polymap("rotated_cardioid", {z0, {0.9, 0.2}, {0.15, 0.0}}));
    // Weighted rows: a log-subharmonic interior density (the second-eigenvalue
    // bound weakens to non-strict there) and positive boundary ripples.
    {
        DomainSpec d = polymap("disk_exp_r2", {z0, {1.0, 0.0}});
        d.density = DensityField::exp_r2();
        out.push_back(std::move(d));
    }
    {
        DomainSpec d = polymap("cardioid_exp_r2", {z0, {1.0, 0.0}, {0.25, 0.0}});
        d.density = DensityField::exp_r2();
        out.push_back(std::move(d));
    }
    {
        DomainSpec d = polymap("disk_wave_boundary", {z0, {1.0, 0.0}});
        d.boundary_density = parse_density("wave:0.3");
        out.push_back(std::move(d));
    }
    {
        DomainSpec d = polymap("trefoil_wave_boundary", {z0, {1.0, 0.0}, z0, {0.2, 0.0}});
        d.boundary_density = parse_density("wave:0.25");
        out.push_back(std::move(d));
    }
    // Polygon rows stay away from the equality cases: conforming P1
    // eigenvalues converge from above, so a near-disk polygon would eat its
    // own geometric margin at practical mesh sizes.
    out.push_back(polygon("overlap_eps0.5", DomainFamily::two_disks_overlap(0.5), mesh_h));
    out.push_back(polygon("square", DomainFamily::square(), mesh_h));
    out.push_back(polygon("ellipse_1.4_0.8", DomainFamily::ellipse(1.4, 0.8, 128), mesh_h));
    out.push_back(
        polygon("passage_L0.5_eps0.2", DomainFamily::two_disks_passage(0.5, 0.2), mesh_h));
    out.push_back(polygon("overlap_eps0.2", DomainFamily::two_disks_overlap(0.2), mesh_h));
    return out;
}

inline ExperimentConfig ExperimentConfig::from_key_values(const KeyValueConfig& cfg) {
    ExperimentConfig ec;
    std::string prob = cfg.get("problem", "both");
    if (prob == "neumann")
        ec.problem = Problem::Neumann;
    else if (prob == "steklov")
        ec.problem = Problem::Steklov;
    else if (prob == "both")
        ec.problem = Problem::Both;
    else
        require(false, "config: problem must be neumann, steklov, or both");
    ec.eps = cfg.get_doubles("eps", ec.eps);
    ec.passage_length = cfg.get_double("passage_length", ec.passage_length);
    ec.neumann_degree = cfg.get_int("neumann_degree", ec.neumann_degree);
    ec.steklov_degree = cfg.get_int("steklov_degree", ec.steklov_degree);
    ec.mesh_h = cfg.get_double("mesh_h", ec.mesh_h);
    ec.seed = cfg.get_u64("seed", ec.seed);
    ec.out_dir = cfg.get("out_dir", ec.out_dir);
    std::string corpus = cfg.get("corpus", "default");
    if (corpus == "default") {
        ec.corpus = default_corpus(ec.mesh_h);
    } else {
        for (auto& path : config_detail::split(corpus, ';'))
            if (!path.empty()) ec.corpus.push_back(DomainSpec::from_file(path));
        require(!ec.corpus.empty(), "config: corpus list is empty");
    }
    ec.validate();
    return ec;
}

}  // namespace spectral_shapes
