#include "actin/fingerprint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>

namespace actin {

namespace {

class Fnv1a {
public:
    void add(const void* data, size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            hash_ ^= bytes[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void add(double v) { add(&v, sizeof v); }
    void add(int v) { add(&v, sizeof v); }

    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(hash_));
        return buf;
    }

private:
    uint64_t hash_ = 0xcbf29ce484222325ULL;
};

void add_waveform(Fnv1a& h, const Waveform& w) {
    h.add(static_cast<int>(w.kind));
    h.add(w.t0);
    h.add(w.amplitude);
    h.add(w.period);
    h.add(w.phase);
    h.add(w.value);
    h.add(w.scale);
}

}  // namespace

std::string fingerprint_config(const FilamentConfig& config,
                               const std::vector<StimulusSpec>& stimuli) {
    Fnv1a h;
    h.add(config.n_monomers);
    for (const auto& c : config.cells) {
        h.add(c.R1);
        h.add(c.R2);
        h.add(c.L);
        h.add(c.C0);
        h.add(c.b);
        h.add(c.n_monomers);
    }
    for (int s : config.site_of) h.add(s);
    for (const auto& spec : stimuli) {
        h.add(static_cast<int>(spec.mode));
        for (int c : spec.cells) h.add(c);
        add_waveform(h, spec.waveform);
    }
    return h.hex();
}

std::string fingerprint_settings(const RunSettings& s) {
    Fnv1a h;
    h.add(s.t_end);
    h.add(s.dt);
    h.add(s.sample_every);
    h.add(static_cast<int>(s.method));
    h.add(s.newton_tol);
    h.add(s.newton_max_iters);
    return h.hex();
}

}  // namespace actin
