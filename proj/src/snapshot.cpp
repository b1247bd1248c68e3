#include "hmhd/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace hmhd {

std::uint32_t model_tag(System s)
{
    switch (s) {
    case System::electron_aniso: return 0;
    case System::electron_general: return 1;
    case System::hallmhd_mixed: return 2;
    case System::hallmhd_classical: return 3;
    }
    return 0;
}

System system_from_tag(std::uint32_t tag)
{
    switch (tag) {
    case 0: return System::electron_aniso;
    case 1: return System::electron_general;
    case 2: return System::hallmhd_mixed;
    case 3: return System::hallmhd_classical;
    }
    throw std::runtime_error("snapshot: unknown model tag " + std::to_string(tag));
}

namespace {

template <class T>
void put(std::vector<char>& buf, T v)
{
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    buf.insert(buf.end(), b, b + sizeof(T));
}

class Reader {
public:
    explicit Reader(std::vector<char> data) : data_(std::move(data)) {}

    template <class T>
    T get()
    {
        if (pos_ + sizeof(T) > data_.size()) throw std::runtime_error("snapshot: truncated file");
        char b[sizeof(T)];
        std::memcpy(b, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
        T v;
        std::memcpy(&v, b, sizeof(T));
        return v;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    std::vector<char> data_;
    std::size_t pos_ = 0;
};

void put_field(std::vector<char>& buf, const VectorField& f)
{
    for (const auto& c : f.c)
        for (const auto& v : c.coeffs()) {
            put(buf, v.real());
            put(buf, v.imag());
        }
}

VectorField get_field(Reader& r, const Grid& g, FieldKind kind)
{
    std::array<SpectralScalar, 3> c;
    for (auto& comp : c) {
        std::vector<cplx> coeffs(g.size());
        for (auto& v : coeffs) {
            const double re = r.get<double>();
            const double im = r.get<double>();
            v = cplx(re, im);
        }
        try {
            comp = SpectralScalar(g, std::move(coeffs));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("snapshot: ") + e.what());
        }
    }
    return VectorField(c[0], c[1], c[2], kind);
}

}

void write_snapshot(const std::string& path, const ModelSpec& spec, const SimState& state)
{
    if (spec.has_velocity() != state.u.has_value())
        throw std::invalid_argument("write_snapshot: velocity field presence does not match the model");
    const Grid& g = state.b.grid();
    std::vector<char> buf{'H', 'M', 'H', 'D'};
    put<std::uint32_t>(buf, snapshot_version);
    put<std::uint32_t>(buf, std::uint32_t(g.dim));
    for (int a = 0; a < g.dim; ++a) put<std::uint32_t>(buf, std::uint32_t(g.n[a]));
    put<std::uint32_t>(buf, model_tag(spec.system));
    put(buf, spec.alpha);
    put(buf, spec.beta);
    put(buf, spec.eps);
    put(buf, state.t);
    put_field(buf, state.b);
    if (state.u) put_field(buf, *state.u);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write snapshot '" + path + "'");
    f.write(buf.data(), std::streamsize(buf.size()));
    if (!f) throw std::runtime_error("failed writing snapshot '" + path + "'");
}

Snapshot read_snapshot(const std::string& path, int band_limit)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read snapshot '" + path + "'");
    Reader r(std::vector<char>(std::istreambuf_iterator<char>(f), {}));
    char magic[4];
    for (auto& m : magic) m = r.get<char>();
    if (std::memcmp(magic, "HMHD", 4) != 0) throw std::runtime_error("snapshot: bad magic in '" + path + "'");
    const auto version = r.get<std::uint32_t>();
    if (version != snapshot_version) throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
    const auto dim = r.get<std::uint32_t>();
    if (dim != 2 && dim != 3) throw std::runtime_error("snapshot: invalid dimension " + std::to_string(dim));
    std::array<int, 3> n{1, 1, 1};
    for (std::uint32_t a = 0; a < dim; ++a) n[a] = int(r.get<std::uint32_t>());
    Snapshot s;
    s.model.system = system_from_tag(r.get<std::uint32_t>());
    s.model.alpha = r.get<double>();
    s.model.beta = r.get<double>();
    s.model.eps = r.get<double>();
    s.state.t = r.get<double>();
    Grid g;
    try {
        g = Grid::make(int(dim), n, band_limit);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("snapshot: ") + e.what());
    }
    s.state.b = get_field(r, g, FieldKind::magnetic);
    if (s.model.has_velocity()) s.state.u = get_field(r, g, FieldKind::velocity);
    if (!r.done()) throw std::runtime_error("snapshot: trailing bytes in '" + path + "'");
    return s;
}

}
