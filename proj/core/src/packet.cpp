#include "diskf/packet.hpp"

#include <bit>
#include <cstring>

#include "diskf/errors.hpp"

namespace diskf {

namespace {

static_assert(sizeof(double) == 8);

void put_double(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
        bits = __builtin_bswap64(bits);
    }
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    double next() {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    Eigen::VectorXd vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = next();
        return v;
    }

    Eigen::MatrixXd matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) m(r, c) = next();
        }
        return m;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void put_vector(std::vector<std::uint8_t>& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put_double(out, v(i));
}

void put_matrix(std::vector<std::uint8_t>& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) put_double(out, m(r, c));
    }
}

}  // namespace

std::size_t packet_byte_size(int state_dim, int input_dim) {
    const std::size_t n = static_cast<std::size_t>(state_dim);
    const std::size_t m = static_cast<std::size_t>(input_dim);
    return 8 * (2 + m + m * m + 3 * n + 2 * n * n);
}

std::vector<std::uint8_t> serialize(const ExchangePacket& p) {
    const int n = static_cast<int>(p.state_pred.size());
    const int m = static_cast<int>(p.input.mean.size());
    std::vector<std::uint8_t> out;
    out.reserve(packet_byte_size(n, m));
    put_double(out, static_cast<double>(p.sender));
    put_double(out, p.input.valid ? 1.0 : 0.0);
    put_vector(out, p.input.mean);
    put_matrix(out, p.input.cov);
    put_vector(out, p.state_pred);
    put_matrix(out, p.cov_pred);
    put_vector(out, p.state_upd);
    put_matrix(out, p.cov_upd);
    put_vector(out, p.state_pred_injected);
    return out;
}

ExchangePacket deserialize(std::span<const std::uint8_t> bytes, int state_dim,
                           int input_dim) {
    if (state_dim <= 0 || input_dim <= 0) {
        throw ConfigError("deserialize: dimensions must be positive");
    }
    if (bytes.size() != packet_byte_size(state_dim, input_dim)) {
        throw ConfigError("deserialize: buffer size mismatch");
    }
    Reader rd(bytes);
    ExchangePacket p;
    const double sender = rd.next();
    const double flag = rd.next();
    if (sender != static_cast<double>(static_cast<int>(sender)) ||
        sender < 0.0) {
        throw ConfigError("deserialize: bad sender field");
    }
    if (flag != 0.0 && flag != 1.0) {
        throw ConfigError("deserialize: bad validity flag");
    }
    p.sender = static_cast<int>(sender);
    p.input.valid = flag == 1.0;
    p.input.mean = rd.vector(input_dim);
    p.input.cov = rd.matrix(input_dim, input_dim);
    p.state_pred = rd.vector(state_dim);
    p.cov_pred = rd.matrix(state_dim, state_dim);
    p.state_upd = rd.vector(state_dim);
    p.cov_upd = rd.matrix(state_dim, state_dim);
    p.state_pred_injected = rd.vector(state_dim);
    if (!p.input.mean.allFinite() || !p.input.cov.allFinite() ||
        !p.state_pred.allFinite() || !p.cov_pred.allFinite() ||
        !p.state_upd.allFinite() || !p.cov_upd.allFinite() ||
        !p.state_pred_injected.allFinite()) {
        throw ConfigError("deserialize: non-finite field");
    }
    return p;
}

}  // namespace diskf
