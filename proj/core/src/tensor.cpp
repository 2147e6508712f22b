#include "mvit/tensor.hpp"

#include <cmath>
#include <limits>

namespace mvit {

std::string shape_to_string(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

namespace alloc_stats {
namespace {
bool g_enabled = false;
std::size_t g_peak = 0;
}  // namespace

void enable() { g_enabled = true; }
void disable() { g_enabled = false; }
void reset() { g_peak = 0; }
bool enabled() { return g_enabled; }
std::size_t peak_elements() { return g_peak; }
void record(std::size_t elements) {
    if (elements > g_peak) g_peak = elements;
}
}  // namespace alloc_stats

template <typename Scalar>
std::size_t TensorT<Scalar>::checked_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw ShapeError("zero dimension in shape " + shape_to_string(shape));
        n *= d;
    }
    return n;
}

template <typename Scalar>
Scalar& TensorT<Scalar>::at(std::initializer_list<std::size_t> idx) {
    return const_cast<Scalar&>(static_cast<const TensorT*>(this)->at(idx));
}

template <typename Scalar>
Scalar TensorT<Scalar>::at(std::initializer_list<std::size_t> idx) const {
    if (idx.size() != shape_.size())
        throw ShapeError("index rank " + std::to_string(idx.size()) + " vs tensor shape " +
                         shape_to_string(shape_));
    std::size_t flat = 0, axis = 0;
    for (std::size_t i : idx) {
        if (i >= shape_[axis])
            throw ShapeError("index out of range on axis " + std::to_string(axis) +
                             " for shape " + shape_to_string(shape_));
        flat = flat * shape_[axis] + i;
        ++axis;
    }
    return data_[flat];
}

template <typename Scalar>
bool TensorT<Scalar>::all_finite() const {
    for (Scalar v : data_)
        if (!std::isfinite(double(v))) return false;
    return true;
}

template class TensorT<float>;
template class TensorT<double>;

namespace {
template <typename Scalar>
TensorT<Scalar> init_impl(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng) {
    if (fan_in < 1) throw ConfigError("seeded_init: fan_in must be >= 1");
    const double bound = std::sqrt(6.0 / double(fan_in));
    TensorT<Scalar> out(std::move(shape));
    for (std::size_t i = 0; i < out.numel(); ++i)
        out[i] = Scalar(rng.next_uniform(-bound, bound));
    return out;
}
}  // namespace

Tensor seeded_init(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng) {
    return init_impl<float>(std::move(shape), fan_in, rng);
}

Tensor64 seeded_init64(std::vector<std::size_t> shape, std::size_t fan_in, Rng& rng) {
    return init_impl<double>(std::move(shape), fan_in, rng);
}

}  // namespace mvit
