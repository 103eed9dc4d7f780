#include "fpme/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpme {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_field(const ScalarField& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    const Grid& g = f.grid;
    out << "# " << g.N << ' ' << format_double(g.R) << ' ' << g.n << '\n';
    double x[2];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.coords(i, x);
        out << format_double(x[0]);
        if (g.N == 2) out << ' ' << format_double(x[1]);
        out << ' ' << format_double(f[i]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty field file " + path.string());
    char hash;
    int N, n;
    double R;
    std::istringstream hdr(line);
    if (!(hdr >> hash >> N >> R >> n) || hash != '#')
        throw std::runtime_error("bad field header in " + path.string());
    Grid g = make_grid(N, R, n);
    ScalarField f(g);
    bool nonneg = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("truncated field file " + path.string());
        std::istringstream row(line);
        double x1, x2, v;
        if (N == 1) {
            if (!(row >> x1 >> v))
                throw std::runtime_error("bad field row in " + path.string());
        } else {
            if (!(row >> x1 >> x2 >> v))
                throw std::runtime_error("bad field row in " + path.string());
        }
        f[i] = v;
        if (v < 0.0) nonneg = false;
    }
    f.nonnegative = nonneg;
    return f;
}

}  // namespace fpme
