#include "erelifm/optim.hpp"

#include <cmath>
#include <cstdlib>

namespace erelifm {

double LrSchedule::at(long step) const {
    switch (kind) {
        case ScheduleKind::Constant:
            return base;
        case ScheduleKind::StepDecay:
            return base * std::pow(factor, static_cast<double>(step / decay_step));
        case ScheduleKind::CyclicTriangular: {
            long phase = step % period;
            double x = static_cast<double>(phase) / static_cast<double>(period);
            double tri = 1.0 - std::abs(2.0 * x - 1.0);
            return lr_min + (lr_max - lr_min) * tri;
        }
    }
    return base;
}

LrSchedule LrSchedule::constant(double lr) {
    LrSchedule s;
    s.kind = ScheduleKind::Constant;
    s.base = lr;
    return s;
}

LrSchedule LrSchedule::step_decay(double base, double factor, long decay_step) {
    LrSchedule s;
    s.kind = ScheduleKind::StepDecay;
    s.base = base;
    s.factor = factor;
    s.decay_step = decay_step;
    return s;
}

LrSchedule LrSchedule::cyclic(double lr_min, double lr_max, long period) {
    LrSchedule s;
    s.kind = ScheduleKind::CyclicTriangular;
    s.lr_min = lr_min;
    s.lr_max = lr_max;
    s.period = period;
    return s;
}

void Sgd::step(Mlp& model) {
    double lr = current_lr();
    auto grad = model.grads_flat();
    if (momentum_ > 0.0) {
        if (velocity_.size() != grad.size()) velocity_.assign(grad.size(), 0.0);
        for (size_t i = 0; i < grad.size(); ++i) {
            velocity_[i] = momentum_ * velocity_[i] + grad[i];
            grad[i] = velocity_[i];
        }
    }
    model.apply_update(grad, lr);
    ++step_;
}

void Adam::step(Mlp& model) {
    double lr = current_lr();
    auto grad = model.grads_flat();
    if (m_.size() != grad.size()) {
        m_.assign(grad.size(), 0.0);
        v_.assign(grad.size(), 0.0);
    }
    ++step_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (size_t i = 0; i < grad.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        grad[i] = (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
    model.apply_update(grad, lr);
}

}  // namespace erelifm
