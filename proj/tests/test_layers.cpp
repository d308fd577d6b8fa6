#include <doctest.h>

#include <cmath>

#include "gemcap/error.hpp"
#include "gemcap/grad_check.hpp"
#include "gemcap/layers.hpp"
#include "test_util.hpp"

using namespace gemcap;
using testutil::dot;
using testutil::projection;

TEST_CASE("param map keeps declaration order and rejects duplicates") {
    ParamMap pm;
    pm.add("w2", Tensor::zeros({2}));
    pm.add("a1", Tensor::zeros({3}));
    pm.add("m0", Tensor::zeros({1}));
    CHECK(pm.items()[0].name == "w2");
    CHECK(pm.items()[1].name == "a1");
    CHECK(pm.items()[2].name == "m0");
    CHECK(pm.at("a1").grad.shape() == std::vector<int>{3});
    CHECK_THROWS(pm.add("w2", Tensor::zeros({2})));
}

TEST_CASE("dense identity weights pass input through") {
    Rng rng(1);
    Dense layer(2, 2, 1.0, rng);
    layer.params().at("W").value = Tensor::from_data({2, 2}, {1, 0, 0, 1});
    layer.params().at("b").value.fill(0.0);

    Tensor x = Tensor::from_data({3, 2}, {1, 2, 3, 4, 5, 6});
    CHECK(layer.forward(x) == x);
}

TEST_CASE("dense known product with bias") {
    Rng rng(1);
    Dense layer(2, 2, 1.0, rng);
    layer.params().at("W").value = Tensor::from_data({2, 2}, {1, 0, 0, 1});
    layer.params().at("b").value = Tensor::from_values({1, 1});

    Tensor y = layer.forward(Tensor::from_data({1, 2}, {1, 2}));
    CHECK(y.at(0, 0) == 2);
    CHECK(y.at(0, 1) == 3);
}

TEST_CASE("dense gradient check") {
    Rng rng(7);
    Dense layer(3, 2, 1.0, rng);
    Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
    Tensor proj = projection({2, 2}, rng);
    Tensor dx;

    auto loss = [&] { return dot(layer.forward(x), proj); };
    auto grads = [&] {
        layer.params().zero_grads();
        Dense::Cache c;
        Tensor y = layer.forward(x, &c);
        dx = layer.backward(proj, c);
    };
    auto report = grad_check(loss, grads,
                             {{"W", &layer.params().at("W").value, &layer.params().at("W").grad},
                              {"b", &layer.params().at("b").value, &layer.params().at("b").grad},
                              {"x", &x, &dx}},
                             1e-4);
    CHECK(report.pass);
    CHECK(report.max_rel_err <= 1e-4);
}

TEST_CASE("conv2d delta kernel is identity") {
    Rng rng(2);
    Conv2d layer(1, 1, rng);
    Tensor w = Tensor::zeros({1, 1, 3, 3});
    w[4] = 1.0; // center tap
    layer.params().at("W").value = w;
    layer.params().at("b").value.fill(0.0);

    Tensor x = Tensor::normal({2, 1, 4, 6}, 0.0, 1.0, rng);
    CHECK(layer.forward(x) == x);
}

TEST_CASE("conv2d all-ones kernel tap count on constant image") {
    Rng rng(2);
    Conv2d layer(1, 1, rng);
    layer.params().at("W").value = Tensor::constant({1, 1, 3, 3}, 1.0);
    layer.params().at("b").value.fill(0.0);

    const double v = 0.7;
    Tensor y = layer.forward(Tensor::constant({1, 1, 5, 5}, v));
    // interior pixels see all 9 taps, edges 6, corners 4
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            CHECK(y[static_cast<std::size_t>(i) * 5 + j] == doctest::Approx(9 * v));
    CHECK(y[0] == doctest::Approx(4 * v));
    CHECK(y[2] == doctest::Approx(6 * v));
}

TEST_CASE("conv2d channel mismatch") {
    Rng rng(2);
    Conv2d layer(3, 4, rng);
    CHECK_THROWS_AS(layer.forward(Tensor::zeros({1, 2, 4, 4})), ShapeMismatch);
}

TEST_CASE("conv2d gradient check") {
    Rng rng(9);
    Conv2d layer(2, 2, rng);
    Tensor x = Tensor::normal({2, 2, 4, 4}, 0.0, 1.0, rng);
    Tensor proj = projection({2, 2, 4, 4}, rng);
    Tensor dx;

    auto loss = [&] { return dot(layer.forward(x), proj); };
    auto grads = [&] {
        layer.params().zero_grads();
        Conv2d::Cache c;
        layer.forward(x, &c);
        dx = layer.backward(proj, c);
    };
    auto report = grad_check(loss, grads,
                             {{"W", &layer.params().at("W").value, &layer.params().at("W").grad},
                              {"b", &layer.params().at("b").value, &layer.params().at("b").grad},
                              {"x", &x, &dx}},
                             1e-4);
    CHECK(report.pass);
}

TEST_CASE("maxpool basics") {
    Tensor c = Tensor::constant({1, 1, 4, 4}, 3.25);
    Tensor y = MaxPool2::forward(c);
    CHECK(y.shape() == std::vector<int>{1, 1, 2, 2});
    for (double v : y.values())
        CHECK(v == 3.25);

    Tensor win = Tensor::from_data({1, 1, 2, 2}, {1, 2, 3, 4});
    MaxPool2::Cache cache;
    Tensor out = MaxPool2::forward(win, &cache);
    CHECK(out[0] == 4);
    Tensor dx = MaxPool2::backward(Tensor::constant({1, 1, 1, 1}, 1.0), cache);
    CHECK(dx[3] == 1.0);
    CHECK(dx[0] == 0.0);

    CHECK_THROWS_AS(MaxPool2::forward(Tensor::zeros({1, 1, 3, 4})), InvalidShape);
}

TEST_CASE("maxpool gradient check away from ties") {
    Rng rng(4);
    Tensor x = Tensor::normal({1, 2, 4, 4}, 0.0, 10.0, rng); // wide spread, no near-ties
    Tensor proj = projection({1, 2, 2, 2}, rng);
    Tensor dx;

    auto loss = [&] { return dot(MaxPool2::forward(x), proj); };
    auto grads = [&] {
        MaxPool2::Cache c;
        MaxPool2::forward(x, &c);
        dx = MaxPool2::backward(proj, c);
    };
    auto report = grad_check(loss, grads, {{"x", &x, &dx}}, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("relu forward cases") {
    Tensor x = Tensor::from_values({-1, 0, 2});
    Tensor y = relu(x);
    CHECK(y[0] == 0);
    CHECK(y[1] == 0);
    CHECK(y[2] == 2);

    Tensor pos = Tensor::from_values({0.5, 3.0});
    CHECK(relu(pos) == pos);
}

TEST_CASE("relu gradient check away from the kink") {
    Rng rng(6);
    Tensor x = Tensor::normal({2, 5}, 0.0, 1.0, rng);
    for (double& v : x.values())
        v = (v >= 0 ? 1.0 : -1.0) * (0.2 + std::abs(v)); // keep |x| > 0.1
    Tensor proj = projection({2, 5}, rng);
    Tensor dx;

    auto loss = [&] { return dot(relu(x), proj); };
    auto grads = [&] {
        ReluCache c;
        relu(x, &c);
        dx = relu_backward(proj, c);
    };
    auto report = grad_check(loss, grads, {{"x", &x, &dx}}, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("embedding identity table and duplicate accumulation") {
    Rng rng(8);
    Embedding emb(3, 3, rng);
    emb.params().at("E").value = Tensor::from_data({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});

    Tensor ids = Tensor::from_values({2});
    Tensor y = emb.forward(ids);
    CHECK(y.at(0, 0) == 0);
    CHECK(y.at(0, 2) == 1);

    // duplicate ids add gradient on the shared row
    Embedding::Cache cache;
    Tensor dup = Tensor::from_values({1, 1});
    emb.forward(dup, &cache);
    emb.params().zero_grads();
    emb.backward(Tensor::constant({2, 3}, 1.0), cache);
    CHECK(emb.params().at("E").grad.at(1, 0) == 2.0);
    CHECK(emb.params().at("E").grad.at(0, 0) == 0.0);

    CHECK_THROWS_AS(emb.forward(Tensor::from_values({3})), VocabOverflow);
}

TEST_CASE("embedding gradient check") {
    Rng rng(10);
    Embedding emb(5, 3, rng);
    Tensor ids = Tensor::from_values({0, 3, 3, 1});
    Tensor proj = projection({4, 3}, rng);

    auto loss = [&] { return dot(emb.forward(ids), proj); };
    auto grads = [&] {
        emb.params().zero_grads();
        Embedding::Cache c;
        emb.forward(ids, &c);
        emb.backward(proj, c);
    };
    auto report = grad_check(loss, grads,
                             {{"E", &emb.params().at("E").value, &emb.params().at("E").grad}},
                             1e-4);
    CHECK(report.pass);
}

TEST_CASE("gru zero-weight closed form") {
    Rng rng(3);
    GruCell cell(1, 1, rng);
    for (auto& p : cell.params().items())
        p.value.fill(0.0);

    Tensor x = Tensor::zeros({1, 1});
    Tensor h = Tensor::constant({1, 1}, 0.4);
    Tensor h_new = cell.forward(x, h);
    CHECK(h_new[0] == 0.2); // z=r=1/2, hbar=0 -> exactly h/2
}

TEST_CASE("gru with zero x-weights depends on h only") {
    Rng rng(12);
    GruCell cell(2, 3, rng);
    for (const char* w : {"Wz", "Wr", "Wh"})
        cell.params().at(w).value.fill(0.0);

    Tensor h = Tensor::normal({1, 3}, 0.0, 1.0, rng);
    Tensor x1 = Tensor::normal({1, 2}, 0.0, 1.0, rng);
    Tensor x2 = Tensor::normal({1, 2}, 0.0, 1.0, rng);
    CHECK(cell.forward(x1, h) == cell.forward(x2, h));
}

TEST_CASE("gru gradient check over all nine parameters and both inputs") {
    Rng rng(21);
    GruCell cell(3, 4, rng);
    Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
    Tensor h = Tensor::normal({2, 4}, 0.0, 1.0, rng);
    Tensor proj = projection({2, 4}, rng);
    GruCell::Grads io_grads;

    auto loss = [&] { return dot(cell.forward(x, h), proj); };
    auto grads = [&] {
        cell.params().zero_grads();
        GruCell::Cache c;
        cell.forward(x, h, &c);
        io_grads = cell.backward(proj, c);
    };

    std::vector<GradProbe> probes;
    for (auto& p : cell.params().items())
        probes.push_back({p.name, &p.value, &p.grad});
    probes.push_back({"x", &x, &io_grads.dx});
    probes.push_back({"h", &h, &io_grads.dh});

    auto report = grad_check(loss, grads, probes, 1e-4);
    CHECK(report.pass);
    CHECK(probes.size() == 11); // 9 params + 2 inputs
}

TEST_CASE("lstm zero-weight closed form") {
    Rng rng(5);
    LstmCell cell(1, 1, rng);
    for (auto& p : cell.params().items())
        p.value.fill(0.0);

    LstmCell::State s{Tensor::zeros({1, 1}), Tensor::constant({1, 1}, 0.4)};
    LstmCell::State out = cell.forward(Tensor::zeros({1, 1}), s);
    CHECK(out.c[0] == 0.2);
    CHECK(out.h[0] == doctest::Approx(0.5 * std::tanh(0.2)).epsilon(1e-12));
    CHECK(out.h[0] == doctest::Approx(0.098688).epsilon(1e-5));

    // c = 0 fixed point
    LstmCell::State zero{Tensor::zeros({1, 1}), Tensor::zeros({1, 1})};
    LstmCell::State out0 = cell.forward(Tensor::zeros({1, 1}), zero);
    CHECK(out0.c[0] == 0.0);
    CHECK(out0.h[0] == 0.0);
}

TEST_CASE("lstm gradient check") {
    Rng rng(22);
    LstmCell cell(3, 4, rng);
    Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
    LstmCell::State s{Tensor::normal({2, 4}, 0.0, 1.0, rng),
                      Tensor::normal({2, 4}, 0.0, 1.0, rng)};
    Tensor proj_h = projection({2, 4}, rng);
    Tensor proj_c = projection({2, 4}, rng);
    LstmCell::Grads io_grads;

    auto loss = [&] {
        LstmCell::State out = cell.forward(x, s);
        return dot(out.h, proj_h) + dot(out.c, proj_c);
    };
    auto grads = [&] {
        cell.params().zero_grads();
        LstmCell::Cache c;
        cell.forward(x, s, &c);
        io_grads = cell.backward(proj_h, proj_c, c);
    };

    std::vector<GradProbe> probes;
    for (auto& p : cell.params().items())
        probes.push_back({p.name, &p.value, &p.grad});
    probes.push_back({"x", &x, &io_grads.dx});
    probes.push_back({"h", &s.h, &io_grads.dh});
    probes.push_back({"c", &s.c, &io_grads.dc});

    auto report = grad_check(loss, grads, probes, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("softmax_xent uniform logits") {
    Tensor logits = Tensor::zeros({3, 4});
    auto res = softmax_xent(logits, {0, 1, 3});
    CHECK(res.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    // rows sum to 1
    for (int b = 0; b < 3; ++b) {
        double s = 0;
        for (int j = 0; j < 4; ++j)
            s += res.probs.at(b, j);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("softmax_xent saturated and out-of-range") {
    Tensor logits = Tensor::zeros({1, 4});
    logits.at(0, 2) = 50.0;
    auto res = softmax_xent(logits, {2});
    CHECK(res.loss < 1e-10);
    CHECK(res.loss >= 0.0);

    CHECK_THROWS_AS(softmax_xent(logits, {4}), VocabOverflow);
}

TEST_CASE("softmax_xent gradient check") {
    Rng rng(30);
    Tensor logits = Tensor::normal({3, 5}, 0.0, 1.0, rng);
    std::vector<int> targets{1, 4, 0};
    Tensor dlogits;

    auto loss = [&] { return softmax_xent(logits, targets).loss; };
    auto grads = [&] { dlogits = softmax_xent(logits, targets).dlogits; };
    auto report = grad_check(loss, grads, {{"logits", &logits, &dlogits}}, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("forward passes are deterministic") {
    Rng rng(17);
    Conv2d conv(2, 3, rng);
    Tensor x = Tensor::normal({1, 2, 4, 4}, 0.0, 1.0, rng);
    CHECK(conv.forward(x) == conv.forward(x));

    GruCell cell(2, 2, rng);
    Tensor xs = Tensor::normal({1, 2}, 0.0, 1.0, rng);
    Tensor h = Tensor::normal({1, 2}, 0.0, 1.0, rng);
    CHECK(cell.forward(xs, h) == cell.forward(xs, h));
}
