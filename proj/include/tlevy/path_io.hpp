#ifndef TLEVY_PATH_IO_HPP
#define TLEVY_PATH_IO_HPP

#include <iosfwd>

#include "tlevy/model.hpp"

namespace tlevy {

/// CSV with columns t, X_1..X_q, Y; '#' header comments carry the sampling
/// design so that `fit` can consume any `simulate` output.
void write_path_csv(const PathSample& path, std::ostream& out);

PathSample read_path_csv(std::istream& in);

}  // namespace tlevy

#endif
