#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvit {

// Errors thrown by the library. ShapeError covers dimension mismatches,
// ConfigError covers invalid hyper-parameters (head counts, width
// multipliers, unsupported kinds).
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

// Tracks the largest single buffer allocated through Tensor while enabled.
// Used by tests that bound the peak intermediate of the separable attention
// path. Not thread safe; enable only around single-threaded sections.
namespace alloc_stats {
void enable();
void disable();
void reset();
bool enabled();
std::size_t peak_elements();
void record(std::size_t elements);
}  // namespace alloc_stats

// Dense row-major tensor. float is the inference scalar; double instances
// exist for oracles and gradient checks.
template <typename Scalar>
class TensorT {
public:
    TensorT() = default;

    explicit TensorT(std::vector<std::size_t> shape)
        : shape_(std::move(shape)), data_(checked_numel(shape_)) {
        if (alloc_stats::enabled()) alloc_stats::record(data_.size());
    }

    TensorT(std::vector<std::size_t> shape, Scalar fill)
        : shape_(std::move(shape)), data_(checked_numel(shape_), fill) {
        if (alloc_stats::enabled()) alloc_stats::record(data_.size());
    }

    TensorT(std::vector<std::size_t> shape, std::vector<Scalar> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (checked_numel(shape_) != data_.size())
            throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_to_string(shape_));
        if (alloc_stats::enabled()) alloc_stats::record(data_.size());
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }
    std::size_t numel() const { return data_.size(); }

    Scalar* data() { return data_.data(); }
    const Scalar* data() const { return data_.data(); }

    Scalar& operator[](std::size_t i) { return data_[i]; }
    Scalar operator[](std::size_t i) const { return data_[i]; }

    // 2-d accessors; shape checked only in at().
    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    // 3-d accessor (c, row, col)
    Scalar& operator()(std::size_t c, std::size_t i, std::size_t j) {
        return data_[(c * shape_[1] + i) * shape_[2] + j];
    }
    Scalar operator()(std::size_t c, std::size_t i, std::size_t j) const {
        return data_[(c * shape_[1] + i) * shape_[2] + j];
    }

    Scalar& at(std::initializer_list<std::size_t> idx);
    Scalar at(std::initializer_list<std::size_t> idx) const;

    // Reinterprets the same data under a new shape of equal element count.
    TensorT reshaped(std::vector<std::size_t> shape) const {
        if (checked_numel(shape) != data_.size())
            throw ShapeError("cannot reshape " + shape_to_string(shape_) + " to " +
                             shape_to_string(shape));
        TensorT out;
        out.shape_ = std::move(shape);
        out.data_ = data_;
        return out;
    }

    bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }

    template <typename Other>
    TensorT<Other> cast() const {
        TensorT<Other> out(shape_);
        for (std::size_t i = 0; i < data_.size(); ++i)
            out[i] = static_cast<Other>(data_[i]);
        return out;
    }

    bool all_finite() const;

private:
    static std::size_t checked_numel(const std::vector<std::size_t>& shape);

    std::vector<std::size_t> shape_;
    std::vector<Scalar> data_;
};

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

// Deterministic 64-bit generator (splitmix64). The sequence depends only on
// the seed, never on the platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    std::size_t next_index(std::size_t n) { return std::size_t(next_u64() % n); }

private:
    std::uint64_t state_;
};

// Uniform init in [-b, b] with b = sqrt(6 / fan_in).
Tensor seeded_init(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng);
Tensor64 seeded_init64(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng);

}  // namespace mvit
