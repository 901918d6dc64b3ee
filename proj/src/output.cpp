#include "actin/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "actin/errors.hpp"

namespace actin {

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "t_ns";
    for (int s = 1; s <= trace.n_sites(); ++s) out << ",V" << s;
    out << '\n';
    char buf[32];
    for (int k = 0; k < trace.n_samples(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", trace.times[static_cast<size_t>(k)] / 1e-9);
        out << buf;
        for (int s = 0; s < trace.n_sites(); ++s) {
            std::snprintf(buf, sizeof buf, "%.17g",
                          trace.voltages[static_cast<size_t>(k)][static_cast<size_t>(s)]);
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out << bytes;
}

}  // namespace actin
