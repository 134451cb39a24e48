#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <vector>

#include "cpldpc/gf2.hpp"
#include "cpldpc/rng.hpp"

using namespace cpldpc;

namespace {

SparseBinMatrix random_matrix(std::size_t rows, std::size_t cols, double density, Rng& rng) {
    std::vector<std::vector<std::uint32_t>> r(rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::uint32_t c = 0; c < cols; ++c)
            if (rng.bernoulli(density)) r[i].push_back(c);
    return SparseBinMatrix(rows, cols, std::move(r));
}

// Dense GF(2) oracle on plain int matrices; independent of the bit-packed path.
struct DenseOracle {
    std::vector<std::vector<int>> m;

    explicit DenseOracle(const SparseBinMatrix& s)
        : m(s.rows(), std::vector<int>(s.cols(), 0)) {
        for (std::size_t r = 0; r < s.rows(); ++r)
            for (auto c : s.row(r)) m[r][c] = 1;
    }

    std::vector<int> multiply(const BitVec& v) const {
        std::vector<int> out(m.size(), 0);
        for (std::size_t r = 0; r < m.size(); ++r)
            for (std::size_t c = 0; c < m[r].size(); ++c)
                out[r] ^= m[r][c] & static_cast<int>(v.get(c));
        return out;
    }

    std::size_t rank() const {
        auto a = m;
        const std::size_t rows = a.size();
        const std::size_t cols = rows ? a[0].size() : 0;
        std::size_t rk = 0;
        for (std::size_t col = 0; col < cols && rk < rows; ++col) {
            std::size_t piv = rk;
            while (piv < rows && a[piv][col] == 0) ++piv;
            if (piv == rows) continue;
            std::swap(a[rk], a[piv]);
            for (std::size_t i = 0; i < rows; ++i)
                if (i != rk && a[i][col] == 1)
                    for (std::size_t c = 0; c < cols; ++c) a[i][c] ^= a[rk][c];
            ++rk;
        }
        return rk;
    }
};

}  // namespace

TEST_CASE("matvec identity and parity") {
    const auto id = SparseBinMatrix::identity(3);
    BitVec v(3);
    v.set(0, true);
    v.set(2, true);
    CHECK(matvec(id, v) == v);

    const SparseBinMatrix ones(1, 4, {{0, 1, 2, 3}});
    BitVec even(4);
    even.set(1, true);
    even.set(3, true);
    CHECK_FALSE(matvec(ones, even).any());

    CHECK_THROWS_AS(matvec(id, BitVec(5)), config_error);
}

TEST_CASE("matvec matches a dense oracle on random matrices") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_matrix(20, 40, 0.15, rng);
        const DenseOracle oracle(m);
        const BitVec v = BitVec::random(40, rng);
        const BitVec got = matvec(m, v);
        const auto want = oracle.multiply(v);
        for (std::size_t r = 0; r < 20; ++r) CHECK(static_cast<int>(got.get(r)) == want[r]);
    }
}

TEST_CASE("matvec is linear") {
    Rng rng(22);
    const auto m = random_matrix(15, 30, 0.2, rng);
    for (int trial = 0; trial < 50; ++trial) {
        const BitVec a = BitVec::random(30, rng);
        BitVec b = BitVec::random(30, rng);
        BitVec ab = a;
        ab ^= b;
        BitVec sum = matvec(m, a);
        sum ^= matvec(m, b);
        CHECK(matvec(m, ab) == sum);
    }
}

TEST_CASE("rank basics and dense oracle") {
    CHECK(rank(SparseBinMatrix::identity(7)) == 7);
    const SparseBinMatrix dup(2, 4, {{1, 3}, {1, 3}});
    CHECK(rank(dup) == 1);
    Rng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        const auto m = random_matrix(30, 60, 0.1, rng);
        CHECK(rank(m) == DenseOracle(m).rank());
    }
}

TEST_CASE("nullspace basis spans the kernel") {
    const SparseBinMatrix zero(2, 3, {{}, {}});
    CHECK(nullspace_basis(zero).size() == 3);
    CHECK(nullspace_basis(SparseBinMatrix::identity(3)).empty());

    Rng rng(24);
    for (int trial = 0; trial < 15; ++trial) {
        const auto m = random_matrix(25, 50, 0.12, rng);
        const auto basis = nullspace_basis(m);
        CHECK(rank(m) + basis.size() == 50);
        for (const auto& v : basis) CHECK_FALSE(matvec(m, v).any());
        for (int k = 0; k < 10; ++k) {
            const BitVec combo = random_combination(basis, 50, rng);
            CHECK_FALSE(matvec(m, combo).any());
        }
    }
}

TEST_CASE("vecmat agrees with matvec on the transpose") {
    Rng rng(25);
    const auto m = random_matrix(18, 27, 0.2, rng);
    const auto mt = m.transposed();
    for (int trial = 0; trial < 25; ++trial) {
        const BitVec v = BitVec::random(18, rng);
        CHECK(vecmat(v, m) == matvec(mt, v));
    }
}

TEST_CASE("alist round trip") {
    Rng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_matrix(12, 20, 0.25, rng);
        std::stringstream ss;
        write_alist(ss, m);
        CHECK(read_alist(ss) == m);
    }
}

TEST_CASE("alist reader accepts zero-padded lists") {
    // 3x4 matrix, lists padded to the max degree with zeros.
    const std::string padded =
        "4 3\n"
        "2 2\n"
        "1 2 1 1\n"
        "2 2 1\n"
        "1 0\n"
        "1 2\n"
        "2 0\n"
        "3 0\n"
        "1 2\n"
        "2 3\n"
        "4 0\n";
    std::istringstream is(padded);
    const auto m = read_alist(is);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 4);
    CHECK(m.row(0) == std::vector<std::uint32_t>{0, 1});
    CHECK(m.row(1) == std::vector<std::uint32_t>{1, 2});
    CHECK(m.row(2) == std::vector<std::uint32_t>{3});
    CHECK_THROWS_AS(
        [] {
            std::istringstream bad("2 2\n1 1\n1 1\n1 1\n1\n2\n1\n3\n");
            return read_alist(bad);
        }(),
        config_error);
}

TEST_CASE("sparse matrix validates its structure") {
    CHECK_THROWS_AS(SparseBinMatrix(1, 3, {{0, 0}}), config_error);   // duplicate
    CHECK_THROWS_AS(SparseBinMatrix(1, 3, {{2, 1}}), config_error);   // unsorted
    CHECK_THROWS_AS(SparseBinMatrix(1, 3, {{3}}), config_error);      // out of range
    CHECK_THROWS_AS(SparseBinMatrix(2, 3, {{0}}), config_error);      // row count
}
