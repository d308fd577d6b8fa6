#include "gemcap/optim.hpp"

#include <cmath>

#include "gemcap/error.hpp"

namespace gemcap {

std::string opt_kind_name(OptKind kind) {
    switch (kind) {
    case OptKind::Adam: return "adam";
    case OptKind::Adagrad: return "adagrad";
    case OptKind::Adadelta: return "adadelta";
    case OptKind::RMSProp: return "rmsprop";
    }
    return "?";
}

OptKind opt_kind_from_name(const std::string& name) {
    if (name == "adam") return OptKind::Adam;
    if (name == "adagrad") return OptKind::Adagrad;
    if (name == "adadelta") return OptKind::Adadelta;
    if (name == "rmsprop") return OptKind::RMSProp;
    throw Error("unknown optimizer: " + name);
}

OptimizerConfig OptimizerConfig::adam(double lr) {
    return OptimizerConfig{OptKind::Adam, lr, 0.9, 0.999, 0.9, 1e-8};
}

OptimizerConfig OptimizerConfig::adagrad(double lr) {
    return OptimizerConfig{OptKind::Adagrad, lr, 0.9, 0.999, 0.9, 1e-8};
}

OptimizerConfig OptimizerConfig::adadelta() {
    return OptimizerConfig{OptKind::Adadelta, 1.0, 0.9, 0.999, 0.9, 1e-6};
}

OptimizerConfig OptimizerConfig::rmsprop(double lr) {
    return OptimizerConfig{OptKind::RMSProp, lr, 0.9, 0.999, 0.9, 1e-6};
}

OptimizerConfig OptimizerConfig::make(OptKind kind, double lr) {
    switch (kind) {
    case OptKind::Adam: return adam(lr);
    case OptKind::Adagrad: return adagrad(lr);
    case OptKind::Adadelta: return adadelta();
    case OptKind::RMSProp: return rmsprop(lr);
    }
    return adam(lr);
}

void Optimizer::step(const std::vector<Param*>& params) {
    if (slots_.empty()) {
        slots_.reserve(params.size());
        for (const Param* p : params) {
            const bool needs_second =
                cfg_.kind == OptKind::Adam || cfg_.kind == OptKind::Adadelta;
            slots_.push_back(Slots{Tensor::zeros(p->value.shape()),
                                   needs_second ? Tensor::zeros(p->value.shape()) : Tensor()});
        }
    }
    if (slots_.size() != params.size())
        throw ShapeMismatch("optimizer bound to a different parameter set");

    ++t_;
    const double lr = cfg_.learning_rate;
    const double b1 = cfg_.beta1, b2 = cfg_.beta2, rho = cfg_.rho, eps = cfg_.epsilon;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));

    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& theta = params[p]->value;
        Tensor& grad = params[p]->grad;
        Slots& s = slots_[p];
        if (!theta.same_shape(s.first))
            throw ShapeMismatch("optimizer slot shape drifted for " + params[p]->name);

        double* tv = theta.data();
        double* gv = grad.data();
        double* m = s.first.data();
        double* v = s.second.empty() ? nullptr : s.second.data();

        switch (cfg_.kind) {
        case OptKind::Adam:
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m[i] = b1 * m[i] + (1.0 - b1) * gv[i];
                v[i] = b2 * v[i] + (1.0 - b2) * gv[i] * gv[i];
                tv[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
            }
            break;
        case OptKind::Adagrad:
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m[i] += gv[i] * gv[i];
                tv[i] -= lr * gv[i] / (std::sqrt(m[i]) + eps);
            }
            break;
        case OptKind::RMSProp:
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m[i] = rho * m[i] + (1.0 - rho) * gv[i] * gv[i];
                tv[i] -= lr * gv[i] / (std::sqrt(m[i]) + eps);
            }
            break;
        case OptKind::Adadelta:
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m[i] = rho * m[i] + (1.0 - rho) * gv[i] * gv[i];
                const double dx = -std::sqrt(v[i] + eps) / std::sqrt(m[i] + eps) * gv[i];
                v[i] = rho * v[i] + (1.0 - rho) * dx * dx;
                tv[i] += dx;
            }
            break;
        }
        grad.fill(0.0);
    }
}

StopDecision early_stop_update(EarlyStop& es, double val_loss) {
    if (std::isnan(val_loss))
        throw TrainingDiverged("validation loss is NaN");
    ++es.epochs_seen;
    if (val_loss < es.best_val_loss - es.min_delta) {
        es.best_val_loss = val_loss;
        es.best_epoch = es.epochs_seen;
        es.epochs_since_improve = 0;
    } else {
        ++es.epochs_since_improve;
    }
    return es.epochs_since_improve >= es.patience ? StopDecision::Stop : StopDecision::Continue;
}

} // namespace gemcap
