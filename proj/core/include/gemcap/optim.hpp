#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gemcap/layers.hpp"

namespace gemcap {

enum class OptKind { Adam, Adagrad, Adadelta, RMSProp };

std::string opt_kind_name(OptKind kind);
OptKind opt_kind_from_name(const std::string& name);

/// Hyperparameters for the four first-order optimizers. Defaults follow
/// the original formulations: Adam beta1=0.9 beta2=0.999 eps=1e-8,
/// RMSProp/Adadelta rho=0.9 eps=1e-6, Adagrad eps=1e-8. Adadelta ignores
/// the learning rate (kept for interface uniformity).
struct OptimizerConfig {
    OptKind kind = OptKind::Adam;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double rho = 0.9;
    double epsilon = 1e-8;

    static OptimizerConfig adam(double lr = 0.001);
    static OptimizerConfig adagrad(double lr = 0.01);
    static OptimizerConfig adadelta();
    static OptimizerConfig rmsprop(double lr = 0.001);
    static OptimizerConfig make(OptKind kind, double lr);
};

/// Applies one of the four update rules to a parameter list. State slots
/// mirror parameter shapes, start at zero and are created on the first
/// step. The optimizer owns the gradient lifecycle: grads are zeroed
/// after every step.
///
/// Update rules (g = grad, theta = value, elementwise):
///   Adam:     t+=1; m=b1*m+(1-b1)*g; v=b2*v+(1-b2)*g^2;
///             mhat=m/(1-b1^t); vhat=v/(1-b2^t);
///             theta -= lr * mhat / (sqrt(vhat) + eps)
///   Adagrad:  acc += g^2; theta -= lr * g / (sqrt(acc) + eps)
///   RMSProp:  eg = rho*eg + (1-rho)*g^2; theta -= lr * g / (sqrt(eg) + eps)
///   Adadelta: eg = rho*eg + (1-rho)*g^2;
///             dx = -sqrt(ed + eps) / sqrt(eg + eps) * g;
///             ed = rho*ed + (1-rho)*dx^2; theta += dx
class Optimizer {
public:
    explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

    void step(const std::vector<Param*>& params);

    const OptimizerConfig& config() const { return cfg_; }
    long step_count() const { return t_; }

private:
    struct Slots {
        Tensor first;  // Adam m / Adagrad acc / RMSProp & Adadelta E[g^2]
        Tensor second; // Adam v / Adadelta E[dx^2]
    };

    OptimizerConfig cfg_;
    long t_ = 0;
    std::vector<Slots> slots_;
};

/// Validation-loss watcher. `update` returns Stop once the loss has not
/// improved by more than min_delta for `patience` consecutive epochs; the
/// best epoch is the one whose checkpoint training reports.
struct EarlyStop {
    int patience = 10;
    double min_delta = 0.0;

    double best_val_loss = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int epochs_seen = 0;
    int epochs_since_improve = 0;
};

enum class StopDecision { Continue, Stop };

/// Feed one epoch's validation loss. Throws TrainingDiverged on NaN.
StopDecision early_stop_update(EarlyStop& es, double val_loss);

} // namespace gemcap
