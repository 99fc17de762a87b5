// SPDX-License-Identifier: Apache-2.0
#include "romopt/fe/matrix_market.hpp"

#include <cstdio>
#include <stdexcept>

namespace romopt::fe {

namespace {

struct File {
    std::FILE* fp;
    explicit File(const std::string& path) : fp(std::fopen(path.c_str(), "w")) {
        if (!fp) throw std::runtime_error("cannot open " + path);
    }
    ~File() { std::fclose(fp); }
};

}  // namespace

void write_matrix_market(const SparseMat& A, const std::string& path) {
    File out(path);
    std::fprintf(out.fp, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(out.fp, "%ld %ld %ld\n", static_cast<long>(A.rows()),
                 static_cast<long>(A.cols()), static_cast<long>(A.nonZeros()));
    for (Eigen::Index col = 0; col < A.outerSize(); ++col)
        for (SparseMat::InnerIterator it(A, col); it; ++it)
            std::fprintf(out.fp, "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                         static_cast<long>(it.col() + 1), it.value());
}

void write_matrix_market(const Eigen::MatrixXd& A, const std::string& path) {
    File out(path);
    std::fprintf(out.fp, "%%%%MatrixMarket matrix array real general\n");
    std::fprintf(out.fp, "%ld %ld\n", static_cast<long>(A.rows()), static_cast<long>(A.cols()));
    for (Eigen::Index col = 0; col < A.cols(); ++col)
        for (Eigen::Index row = 0; row < A.rows(); ++row)
            std::fprintf(out.fp, "%.17g\n", A(row, col));
}

void write_matrix_market(const Eigen::VectorXd& v, const std::string& path) {
    File out(path);
    std::fprintf(out.fp, "%%%%MatrixMarket matrix array real general\n");
    std::fprintf(out.fp, "%ld 1\n", static_cast<long>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) std::fprintf(out.fp, "%.17g\n", v[i]);
}

void export_system(const SecondOrderSystem& sys, const std::string& prefix) {
    write_matrix_market(sys.M, prefix + "_M.mtx");
    write_matrix_market(sys.C, prefix + "_C.mtx");
    write_matrix_market(sys.K, prefix + "_K.mtx");
    write_matrix_market(sys.f, prefix + "_f.mtx");
    write_matrix_market(sys.g, prefix + "_g.mtx");
}

}  // namespace romopt::fe
