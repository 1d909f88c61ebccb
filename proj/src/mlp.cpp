#include "erelifm/mlp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "erelifm/kernels.hpp"

namespace erelifm {

Mlp::Mlp(std::vector<size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    require(sizes_.size() >= 2, "Mlp needs at least input and output sizes");
    for (size_t i = 1; i < sizes_.size(); ++i) {
        layers_.push_back({Matrix(sizes_[i], sizes_[i - 1]), std::vector<double>(sizes_[i], 0.0)});
        grads_.push_back({Matrix(sizes_[i], sizes_[i - 1]), std::vector<double>(sizes_[i], 0.0)});
    }
}

Mlp Mlp::random(std::vector<size_t> layer_sizes, Rng& rng) {
    Mlp m(std::move(layer_sizes));
    for (auto& layer : m.layers_) {
        double scale = 1.0 / std::sqrt(static_cast<double>(layer.w.cols));
        for (auto& v : layer.w.data) v = rng.uniform(-scale, scale);
        for (auto& v : layer.b) v = rng.uniform(-scale, scale);
    }
    return m;
}

Matrix Mlp::forward(const Matrix& batch) {
    require(batch.cols == input_size(), "batch width does not match model input size");
    acts_.assign(1, batch);
    pre_.clear();
    for (size_t li = 0; li < layers_.size(); ++li) {
        Matrix z;
        kernels::matmul_nt(acts_.back(), layers_[li].w, z);
        for (size_t r = 0; r < z.rows; ++r)
            for (size_t c = 0; c < z.cols; ++c) z(r, c) += layers_[li].b[c];
        pre_.push_back(z);
        if (li + 1 < layers_.size()) {
            for (auto& v : z.data) v = v > 0.0 ? v : 0.0;
        }
        acts_.push_back(std::move(z));
    }
    cached_ = true;
    return acts_.back();
}

Matrix Mlp::forward_eval(const Matrix& batch) const {
    require(batch.cols == input_size(), "batch width does not match model input size");
    Matrix a = batch;
    for (size_t li = 0; li < layers_.size(); ++li) {
        Matrix z;
        kernels::matmul_nt(a, layers_[li].w, z);
        for (size_t r = 0; r < z.rows; ++r)
            for (size_t c = 0; c < z.cols; ++c) z(r, c) += layers_[li].b[c];
        if (li + 1 < layers_.size())
            for (auto& v : z.data) v = v > 0.0 ? v : 0.0;
        a = std::move(z);
    }
    return a;
}

void Mlp::backward(const Matrix& upstream) {
    if (!cached_) throw std::logic_error("backward called without a cached forward pass");
    require(upstream.rows == acts_.back().rows && upstream.cols == output_size(),
            "upstream gradient shape mismatch");
    Matrix delta = upstream;
    for (size_t li = layers_.size(); li-- > 0;) {
        if (li + 1 < layers_.size()) {
            // through the rectifier of layer li
            for (size_t i = 0; i < delta.size(); ++i)
                if (pre_[li].data[i] <= 0.0) delta.data[i] = 0.0;
        }
        kernels::matmul_tn(delta, acts_[li], grads_[li].w);
        for (auto& v : grads_[li].b) v = 0.0;
        for (size_t r = 0; r < delta.rows; ++r)
            for (size_t c = 0; c < delta.cols; ++c) grads_[li].b[c] += delta(r, c);
        if (li > 0) {
            Matrix next;
            kernels::matmul_nn(delta, layers_[li].w, next);
            delta = std::move(next);
        }
    }
    cached_ = false;
}

void Mlp::zero_grad() {
    for (auto& g : grads_) {
        g.w.fill(0.0);
        std::fill(g.b.begin(), g.b.end(), 0.0);
    }
}

size_t Mlp::param_count() const {
    size_t n = 0;
    for (const auto& l : layers_) n += l.w.size() + l.b.size();
    return n;
}

namespace {
template <typename Layers>
auto* locate(Layers& layers, size_t i) {
    for (auto& l : layers) {
        if (i < l.w.size()) return &l.w.data[i];
        i -= l.w.size();
        if (i < l.b.size()) return &l.b[i];
        i -= l.b.size();
    }
    throw std::out_of_range("parameter index out of range");
}
}  // namespace

double Mlp::get_param(size_t i) const { return *locate(layers_, i); }
void Mlp::set_param(size_t i, double v) { *locate(layers_, i) = v; }
double Mlp::get_grad(size_t i) const { return *locate(grads_, i); }

std::vector<double> Mlp::params_flat() const {
    std::vector<double> out;
    out.reserve(param_count());
    for (const auto& l : layers_) {
        out.insert(out.end(), l.w.data.begin(), l.w.data.end());
        out.insert(out.end(), l.b.begin(), l.b.end());
    }
    return out;
}

void Mlp::set_params_flat(const std::vector<double>& p) {
    require(p.size() == param_count(), "flat parameter size mismatch");
    size_t i = 0;
    for (auto& l : layers_) {
        for (auto& v : l.w.data) v = p[i++];
        for (auto& v : l.b) v = p[i++];
    }
}

std::vector<double> Mlp::grads_flat() const {
    std::vector<double> out;
    out.reserve(param_count());
    for (const auto& g : grads_) {
        out.insert(out.end(), g.w.data.begin(), g.w.data.end());
        out.insert(out.end(), g.b.begin(), g.b.end());
    }
    return out;
}

void Mlp::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "erelifm-mlp v1\n";
    out << sizes_.size();
    for (size_t s : sizes_) out << ' ' << s;
    out << '\n';
    out.precision(17);
    auto params = params_flat();
    out << params.size() << '\n';
    for (double p : params) out << p << '\n';
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    while (std::getline(in, header) && !header.empty() && header[0] == '#') {
    }
    if (header != "erelifm-mlp v1")
        throw std::runtime_error("unrecognized model file: " + path);
    size_t n = 0;
    in >> n;
    std::vector<size_t> sizes(n);
    for (auto& s : sizes) in >> s;
    Mlp m(sizes);
    size_t np = 0;
    in >> np;
    std::vector<double> params(np);
    for (auto& p : params) in >> p;
    m.set_params_flat(params);
    return m;
}

void Mlp::apply_update(const std::vector<double>& grad, double lr) {
    require(grad.size() == param_count(), "gradient size mismatch");
    size_t i = 0;
    for (auto& l : layers_) {
        for (auto& v : l.w.data) v -= lr * grad[i++];
        for (auto& v : l.b) v -= lr * grad[i++];
    }
}

}  // namespace erelifm
