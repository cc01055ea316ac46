#pragma once

// Batch arithmetic used by the quadrature panels.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The public entry points dispatch once at first use based on CPUID;
// setting SISEARCH_KERNELS=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace sisearch::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// ISA selected for this process.
Isa active_isa();

/// out[i] = (1 - x[i])^exponent.
void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

/// out = M v, with M stored row-major as out.size() rows of v.size() columns.
void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out);

namespace scalar {
void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out);
}  // namespace scalar

namespace avx2 {
/// True when the binary carries the AVX2 variant and the CPU supports AVX2+FMA.
bool available();
void complement_power(std::span<const double> x, unsigned exponent, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
void matvec(std::span<const double> matrix, std::span<const double> v, std::span<double> out);
}  // namespace avx2

}  // namespace sisearch::kernels
