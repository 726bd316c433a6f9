#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace spectral_shapes {

enum class Part { Interior, Boundary };

// Weighted atoms on the closed unit disk. Interior and boundary atoms can
// coexist in one measure; weights are finite and nonnegative.
struct DiscreteMeasure {
    std::vector<Complex> z;
    std::vector<double> w;
    std::vector<Part> part;

    size_t size() const { return z.size(); }

    void push_back(Complex zi, double wi, Part pi) {
        z.push_back(zi);
        w.push_back(wi);
        part.push_back(pi);
    }

    double mass() const {
        double s = 0.0;
        for (double wi : w) s += wi;
        return s;
    }

    double mass(Part p) const {
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i)
            if (part[i] == p) s += w[i];
        return s;
    }

    DiscreteMeasure restrict_to(Part p) const {
        DiscreteMeasure out;
        for (size_t i = 0; i < z.size(); ++i)
            if (part[i] == p) out.push_back(z[i], w[i], part[i]);
        return out;
    }

    void scale_mass(double target) {
        double m = mass();
        require(m > 0.0, "DiscreteMeasure: cannot rescale zero mass");
        double s = target / m;
        for (double& wi : w) wi *= s;
    }

    void validate() const {
        require(z.size() == w.size() && z.size() == part.size(),
                "DiscreteMeasure: component sizes differ");
        require(!z.empty(), "DiscreteMeasure: empty");
        for (size_t i = 0; i < z.size(); ++i) {
            require(std::isfinite(w[i]) && w[i] >= 0.0,
                    "DiscreteMeasure: weight " + std::to_string(i) +
                        " negative or not finite");
            double a = std::abs(z[i]);
            require(std::isfinite(a), "DiscreteMeasure: node not finite");
            if (part[i] == Part::Interior)
                require(a <= 1.0 + 1e-9, "DiscreteMeasure: interior node outside disk");
            else
                require(std::abs(a - 1.0) <= 1e-9,
                        "DiscreteMeasure: boundary node off the unit circle");
        }
    }
};

inline void write_measure_csv(const std::string& path, const DiscreteMeasure& m) {
    std::ofstream out(path);
    require(out.good(), "write_measure_csv: cannot open " + path);
    out << "re,im,weight,part\n";
    out.precision(17);
    for (size_t i = 0; i < m.size(); ++i)
        out << m.z[i].real() << ',' << m.z[i].imag() << ',' << m.w[i] << ','
            << (m.part[i] == Part::Interior ? "interior" : "boundary") << '\n';
    require(out.good(), "write_measure_csv: write failed for " + path);
}

inline DiscreteMeasure read_measure_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "read_measure_csv: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)),
            "read_measure_csv: empty file " + path);
    // Tolerate trailing carriage returns from foreign line endings.
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    require(line == "re,im,weight,part",
            "read_measure_csv: bad header in " + path + ": " + line);
    DiscreteMeasure m;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[4];
        for (int k = 0; k < 4; ++k)
            require(static_cast<bool>(std::getline(ss, f[k], ',')),
                    "read_measure_csv: short row at line " + std::to_string(lineno));
        try {
            double re = std::stod(f[0]), im = std::stod(f[1]), wt = std::stod(f[2]);
            Part p;
            if (f[3] == "interior") p = Part::Interior;
            else if (f[3] == "boundary") p = Part::Boundary;
            else throw Error("read_measure_csv: unknown part '" + f[3] + "'");
            m.push_back({re, im}, wt, p);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("read_measure_csv: unparsable row at line " +
                        std::to_string(lineno));
        }
    }
    m.validate();
    return m;
}

}  // namespace spectral_shapes
