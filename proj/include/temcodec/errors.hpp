#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace temcodec {

/// Base class for all library errors.
struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/// Row/column counts of an argument do not match the operation's contract.
struct DimensionMismatch : Error {
	using Error::Error;
};

/// The mixing matrix does not have full column rank.
struct RankDeficient : Error {
	using Error::Error;
};

/// A J-row submatrix of the mixing matrix is numerically singular.
struct SubsetDegenerate : Error {
	std::vector<int> rows;
	explicit SubsetDegenerate(std::vector<int> degenerate_rows);
};

/// Relative error against an identically-zero reference signal is undefined.
struct ZeroSignal : Error {
	using Error::Error;
};

/// Malformed or inconsistent configuration input.
struct ConfigError : Error {
	using Error::Error;
};

/// File could not be read or written; message carries the path.
struct IoError : Error {
	using Error::Error;
};

/// Bias bisection could not realize the requested spike count.
struct CalibrationError : Error {
	using Error::Error;
};

}  // namespace temcodec
