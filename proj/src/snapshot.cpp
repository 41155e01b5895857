#include "tqg/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "tqg/errors.hpp"

namespace tqg {

namespace {
void put_u32(std::ostream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), 4);
}
void put_u64(std::ostream& f, std::uint64_t v) {
    f.write(reinterpret_cast<const char*>(&v), 8);
}
void put_f64(std::ostream& f, double v) {
    f.write(reinterpret_cast<const char*>(&v), 8);
}

struct Reader {
    std::vector<char> bytes;
    std::size_t pos = 0;
    const std::string& path;

    void need(std::size_t k) const {
        if (pos + k > bytes.size()) throw io_error("truncated snapshot: " + path);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + pos, 4);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v;
        std::memcpy(&v, bytes.data() + pos, 8);
        pos += 8;
        return v;
    }
    double f64() {
        need(8);
        double v;
        std::memcpy(&v, bytes.data() + pos, 8);
        pos += 8;
        return v;
    }
};

void write_block(std::ostream& f, const SphereField& field, std::uint32_t lmax) {
    if (field.lmax != static_cast<int>(lmax)) {
        throw io_error("snapshot block truncation degree mismatch");
    }
    for (int i = 0; i < field.size(); ++i) {
        put_f64(f, field.coeffs[i].real());
        put_f64(f, field.coeffs[i].imag());
    }
}

SphereField read_block(Reader& r, std::uint32_t lmax, const char* name) {
    SphereField field(static_cast<int>(lmax));
    for (int i = 0; i < field.size(); ++i) {
        const double re = r.f64();
        const double im = r.f64();
        field.coeffs[i] = Complex(re, im);
    }
    const double scale = std::max(1.0, field.coeffs.cwiseAbs().maxCoeff());
    if (field.reality_residual() > 1e-10 * scale) {
        throw field_error(std::string("snapshot block '") + name +
                          "' violates the reality condition");
    }
    return field;
}
}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
    if (s.lmax != s.n - 1) throw io_error("snapshot header requires lmax = N - 1");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open snapshot for writing: " + path);
    f.write("TQGZ", 4);
    put_u32(f, 1);
    put_u32(f, s.n);
    put_u32(f, s.lmax);
    put_f64(f, s.time);
    put_f64(f, s.rossby);
    put_f64(f, s.gamma);
    put_f64(f, s.coriolis_scale);
    put_u64(f, s.seed);
    write_block(f, s.q, s.lmax);
    write_block(f, s.b, s.lmax);
    write_block(f, s.h1, s.lmax);
    if (!f) throw io_error("failed writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open snapshot: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
    Reader r{std::move(bytes), 0, path};

    r.need(4);
    if (std::memcmp(r.bytes.data(), "TQGZ", 4) != 0) {
        throw io_error("bad snapshot magic: " + path);
    }
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != 1) {
        throw io_error("unsupported snapshot version " + std::to_string(version));
    }
    Snapshot s;
    s.n = r.u32();
    s.lmax = r.u32();
    if (s.n < 2 || s.lmax != s.n - 1) {
        throw io_error("snapshot header requires lmax = N - 1");
    }
    s.time = r.f64();
    s.rossby = r.f64();
    s.gamma = r.f64();
    s.coriolis_scale = r.f64();
    s.seed = r.u64();
    s.q = read_block(r, s.lmax, "q");
    s.b = read_block(r, s.lmax, "b");
    s.h1 = read_block(r, s.lmax, "h1");
    if (r.pos != r.bytes.size()) {
        throw io_error("trailing bytes in snapshot: " + path);
    }
    return s;
}

}  // namespace tqg
