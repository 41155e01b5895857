#include "tqg/basis.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "tqg/errors.hpp"

namespace tqg {

namespace {
const Complex kI(0.0, 1.0);

// FNV-1a over the cache payload.
std::uint64_t fnv1a(const unsigned char* data, std::size_t len,
                    std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

void append_bytes(std::vector<unsigned char>& buf, const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    buf.insert(buf.end(), b, b + len);
}
}  // namespace

double quantization_hbar(int n) {
    return 2.0 / std::sqrt(double(n) * n - 1.0);
}

std::array<Eigen::MatrixXcd, 3> su2_generators(int n) {
    if (n < 2) throw size_error("su(2) generators need n >= 2");
    const double s = 0.5 * (n - 1);
    const double hbar = quantization_hbar(n);

    Eigen::MatrixXcd splus = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd s3 = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const double sj = s - j;
        s3(j, j) = sj;
        if (j + 1 < n) splus(j, j + 1) = std::sqrt(s * (s + 1.0) - sj * (sj - 1.0));
    }
    const Eigen::MatrixXcd sminus = splus.adjoint();

    std::array<Eigen::MatrixXcd, 3> x;
    x[0] = kI * hbar * 0.5 * (splus + sminus);
    x[1] = kI * hbar * (0.5 / kI) * (splus - sminus);
    x[2] = kI * hbar * s3;
    return x;
}

void MatrixHarmonicsBasis::build_operator_data() {
    hbar_ = quantization_hbar(n_);
    x_ = su2_generators(n_);

    const double s = 0.5 * (n_ - 1);
    const double cas = s * (s + 1.0);
    // Ladder coefficient c_j between rows j and j+1 (0-based).
    Eigen::VectorXd c(n_ - 1);
    for (int j = 0; j + 1 < n_; ++j) {
        const double sj = weight(j);
        c[j] = std::sqrt(cas - sj * (sj - 1.0));
    }

    lap_diag_.resize(n_);
    lap_off_.resize(n_);
    for (int m = 0; m < n_; ++m) {
        const int k = n_ - m;
        lap_diag_[m].resize(k);
        lap_off_[m].resize(std::max(0, k - 1));
        for (int j = 0; j < k; ++j) {
            lap_diag_[m][j] = 2.0 * weight(j) * weight(j + m) - 2.0 * cas;
        }
        for (int j = 0; j + 1 < k; ++j) {
            lap_off_[m][j] = c[j] * c[j + m];
        }
    }
}

MatrixHarmonicsBasis MatrixHarmonicsBasis::build(int n) {
    if (n < 2) throw size_error("matrix harmonics basis needs n >= 2");
    MatrixHarmonicsBasis b;
    b.n_ = n;
    b.build_operator_data();

    b.eigval_.resize(n);
    b.eigvec_.resize(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    for (int m = 0; m < n; ++m) {
        const int k = n - m;
        if (k == 1) {
            b.eigval_[m] = b.lap_diag_[m];
            b.eigvec_[m] = Eigen::MatrixXd::Ones(1, 1);
            continue;
        }
        solver.computeFromTridiagonal(b.lap_diag_[m], b.lap_off_[m]);
        if (solver.info() != Eigen::Success) {
            throw numeric_error("tridiagonal eigen-solve failed on diagonal " +
                                std::to_string(m));
        }
        // Ascending eigenvalues are -l(l+1) with l descending; reorder to
        // l ascending (column l-m <-> degree l).
        b.eigval_[m].resize(k);
        b.eigvec_[m].resize(k, k);
        for (int i = 0; i < k; ++i) {
            b.eigval_[m][i] = solver.eigenvalues()[k - 1 - i];
            b.eigvec_[m].col(i) = solver.eigenvectors().col(k - 1 - i);
        }
        // Phase convention: leading significant entry positive.
        for (int i = 0; i < k; ++i) {
            auto col = b.eigvec_[m].col(i);
            const double thresh = 1e-8 * col.cwiseAbs().maxCoeff();
            for (int j = 0; j < k; ++j) {
                if (std::abs(col[j]) >= thresh) {
                    if (col[j] < 0.0) col = -col;
                    break;
                }
            }
        }
    }
    return b;
}

Eigen::MatrixXcd MatrixHarmonicsBasis::harmonic(int l, int m) const {
    const int am = std::abs(m);
    if (l < 0 || l >= n_ || am > l) {
        throw size_error("harmonic index (l, m) out of range");
    }
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n_, n_);
    const auto& v = eigvec_[am].col(l - am);
    for (int j = 0; j + am < n_; ++j) t(j, j + am) = v[j];
    if (m < 0) {
        // T_{l,-m} = (-1)^m T_{lm}^dagger
        Eigen::MatrixXcd td = t.adjoint();
        if (am % 2 != 0) td = -td;
        return td;
    }
    return t;
}

void MatrixHarmonicsBasis::write_cache(const std::string& path) const {
    std::vector<unsigned char> payload;
    const std::uint32_t version = 1;
    const std::uint32_t n32 = static_cast<std::uint32_t>(n_);
    append_bytes(payload, "TQGB", 4);
    append_bytes(payload, &version, 4);
    append_bytes(payload, &n32, 4);
    for (int m = 0; m < n_; ++m) {
        append_bytes(payload, eigval_[m].data(), sizeof(double) * eigval_[m].size());
        append_bytes(payload, eigvec_[m].data(), sizeof(double) * eigvec_[m].size());
    }
    const std::uint64_t sum = fnv1a(payload.data(), payload.size());

    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open basis cache for writing: " + path);
    f.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    f.write(reinterpret_cast<const char*>(&sum), 8);
    if (!f) throw io_error("failed writing basis cache: " + path);
}

bool MatrixHarmonicsBasis::read_cache(const std::string& path, int n,
                                      MatrixHarmonicsBasis& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    std::size_t expect = 12;
    for (int m = 0; m < n; ++m) {
        const std::size_t k = static_cast<std::size_t>(n - m);
        expect += sizeof(double) * (k + k * k);
    }
    if (bytes.size() != expect + 8) return false;
    if (std::memcmp(bytes.data(), "TQGB", 4) != 0) return false;
    std::uint32_t version = 0, n32 = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    std::memcpy(&n32, bytes.data() + 8, 4);
    if (version != 1 || n32 != static_cast<std::uint32_t>(n)) return false;
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + expect, 8);
    if (fnv1a(bytes.data(), expect) != stored) return false;

    out.n_ = n;
    out.build_operator_data();
    out.eigval_.resize(n);
    out.eigvec_.resize(n);
    std::size_t off = 12;
    for (int m = 0; m < n; ++m) {
        const int k = n - m;
        out.eigval_[m].resize(k);
        std::memcpy(out.eigval_[m].data(), bytes.data() + off, sizeof(double) * k);
        off += sizeof(double) * k;
        out.eigvec_[m].resize(k, k);
        std::memcpy(out.eigvec_[m].data(), bytes.data() + off,
                    sizeof(double) * std::size_t(k) * k);
        off += sizeof(double) * std::size_t(k) * k;
    }
    return true;
}

MatrixHarmonicsBasis MatrixHarmonicsBasis::load_or_build(int n,
                                                         const std::string& cache_dir) {
    std::string dir = cache_dir;
    if (const char* env = std::getenv("TQG_BASIS_CACHE_DIR")) dir = env;
    const std::string path =
        (std::filesystem::path(dir) / ("basis_n" + std::to_string(n) + ".tqgb"))
            .string();
    MatrixHarmonicsBasis b;
    if (read_cache(path, n, b)) return b;
    b = build(n);
    b.write_cache(path);
    return b;
}

}  // namespace tqg
