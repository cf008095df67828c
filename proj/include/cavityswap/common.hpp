#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cavityswap
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Two objects were combined that live on different bases.
class BasisMismatchError : public Error
{
public:
	using Error::Error;
};

class InvalidArgumentError : public Error
{
public:
	using Error::Error;
};

/// Time evolution produced non-finite values or failed its accuracy check.
class EvolutionError : public Error
{
public:
	using Error::Error;
};

class ConfigError : public Error
{
public:
	using Error::Error;
};

} // namespace cavityswap
