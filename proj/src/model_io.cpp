#include <stdexcept>

#include <nlohmann/json.hpp>

#include "stylodetect/ml.hpp"

namespace stylo::ml {

namespace {

using nlohmann::json;

json tree_to_json(const DecisionTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes)
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    return nodes;
}

DecisionTree tree_from_json(const json& nodes, size_t n_features) {
    DecisionTree t;
    t.n_features = n_features;
    t.nodes.reserve(nodes.size());
    for (const auto& n : nodes) {
        if (!n.is_array() || n.size() != 5)
            throw std::runtime_error("model file: malformed tree node");
        TreeNode node;
        node.feature = n[0].get<int>();
        node.threshold = n[1].get<double>();
        node.left = n[2].get<int>();
        node.right = n[3].get<int>();
        node.value = n[4].get<double>();
        t.nodes.push_back(node);
    }
    return t;
}

json envelope(const char* kind, size_t n_features) {
    return json{{"format", "stylo-model"}, {"version", 1}, {"kind", kind},
                {"n_features", n_features}};
}

const json& parse_checked(const json& j) {
    if (!j.is_object() || j.value("format", std::string()) != "stylo-model")
        throw std::runtime_error("not a model file");
    int version = j.value("version", 0);
    if (version != 1)
        throw std::runtime_error("unsupported model version " + std::to_string(version));
    return j;
}

} // namespace

std::string save_model(const ForestModel& m) {
    json j = envelope("forest", m.n_features);
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    return j.dump();
}

std::string save_model(const BoostedModel& m) {
    json j = envelope("boosted", m.n_features);
    j["base_score"] = m.base_score;
    j["learning_rate"] = m.learning_rate;
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    return j.dump();
}

std::string save_model(const MlpModel& m) {
    json j = envelope("mlp", m.n_features);
    j["scaler"] = json{{"mean", m.scaler.mean}, {"stdev", m.scaler.stdev}};
    j["w1"] = m.net.w1;
    j["b1"] = m.net.b1;
    j["w2"] = m.net.w2;
    j["b2"] = m.net.b2;
    return j.dump();
}

AnyModel load_model(const std::string& json_text) {
    const json j = parse_checked(json::parse(json_text));
    AnyModel out;
    out.kind = j.at("kind").get<std::string>();
    size_t d = j.at("n_features").get<size_t>();
    if (out.kind == "forest") {
        ForestModel m;
        m.n_features = d;
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, d));
        out.forest = std::move(m);
    } else if (out.kind == "boosted") {
        BoostedModel m;
        m.n_features = d;
        m.base_score = j.at("base_score").get<double>();
        m.learning_rate = j.at("learning_rate").get<double>();
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, d));
        out.boosted = std::move(m);
    } else if (out.kind == "mlp") {
        MlpModel m;
        m.n_features = d;
        m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
        m.scaler.stdev = j.at("scaler").at("stdev").get<std::vector<double>>();
        m.net.w1 = j.at("w1").get<Matrix>();
        m.net.b1 = j.at("b1").get<std::vector<double>>();
        m.net.w2 = j.at("w2").get<std::vector<double>>();
        m.net.b2 = j.at("b2").get<double>();
        out.mlp = std::move(m);
    } else {
        throw std::runtime_error("unknown model kind \"" + out.kind + "\"");
    }
    return out;
}

double AnyModel::predict_proba(const std::vector<double>& x) const {
    if (forest) return forest->predict_proba(x);
    if (boosted) return boosted->predict_proba(x);
    if (mlp) return mlp->predict_proba(x);
    throw std::logic_error("predict on an empty model");
}

int AnyModel::predict(const std::vector<double>& x) const {
    return predict_proba(x) > 0.5 ? 1 : 0;
}

size_t AnyModel::n_features() const {
    if (forest) return forest->n_features;
    if (boosted) return boosted->n_features;
    if (mlp) return mlp->n_features;
    return 0;
}

} // namespace stylo::ml
