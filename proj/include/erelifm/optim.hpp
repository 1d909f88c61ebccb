#pragma once

#include <vector>

#include "erelifm/mlp.hpp"

namespace erelifm {

enum class ScheduleKind { Constant, StepDecay, CyclicTriangular };

struct LrSchedule {
    ScheduleKind kind = ScheduleKind::Constant;
    double base = 1e-3;
    // step decay
    double factor = 0.1;
    long decay_step = 8000;
    // cyclic triangular
    double lr_min = 0.0;
    double lr_max = 1e-3;
    long period = 100;

    double at(long step) const;

    static LrSchedule constant(double lr);
    static LrSchedule step_decay(double base, double factor, long decay_step);
    static LrSchedule cyclic(double lr_min, double lr_max, long period);
};

// Plain SGD; momentum available but off by default.
class Sgd {
public:
    explicit Sgd(LrSchedule sched, double momentum = 0.0)
        : sched_(sched), momentum_(momentum) {}

    double current_lr() const { return sched_.at(step_); }
    long step_count() const { return step_; }

    // Applies the model's own gradient buffers and advances the step.
    void step(Mlp& model);

private:
    LrSchedule sched_;
    double momentum_;
    long step_ = 0;
    std::vector<double> velocity_;
};

// Adam with the usual bias correction; used where plain SGD converges
// too slowly (the flow field).
class Adam {
public:
    explicit Adam(LrSchedule sched, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : sched_(sched), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    double current_lr() const { return sched_.at(step_); }
    long step_count() const { return step_; }

    void step(Mlp& model);

private:
    LrSchedule sched_;
    double beta1_, beta2_, eps_;
    long step_ = 0;
    std::vector<double> m_, v_;
};

}  // namespace erelifm
