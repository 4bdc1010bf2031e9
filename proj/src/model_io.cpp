#include "geonet/model_io.hpp"

#include <fstream>
#include <string>

#include "json.hpp"

#include "geonet/error.hpp"
#include "geonet/version.hpp"

namespace geonet {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "geonet-model";

json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (std::size_t e = 0; e < m.size(); ++e) data.push_back(m.data()[e]);
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
        fail(errc::parse_error, "matrix payload does not match its declared shape");
    }
    Matrix m(rows, cols);
    for (std::size_t e = 0; e < m.size(); ++e) m.data()[e] = data[e].get<double>();
    return m;
}

LayerKind kind_from_name(const std::string& name) {
    for (LayerKind k : {LayerKind::affine, LayerKind::polynomial, LayerKind::rbf,
                        LayerKind::leaky_relu, LayerKind::parametric_relu}) {
        if (name == layer_kind_name(k)) return k;
    }
    fail(errc::parse_error, "unknown layer kind '" + name + "'");
}

json document_shell(const std::string& kind) {
    json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kVersion;
    doc["kind"] = kind;
    return doc;
}

void write_document(const json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) fail(errc::io_error, "short write to '" + path + "'");
}

json read_document(const std::string& path, const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(errc::parse_error, "'" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
        fail(errc::bad_magic, "'" + path + "' is not a model file");
    }
    const std::string version = doc.value("version", "");
    const std::string major(version, 0, version.find('.'));
    const std::string own(kVersion);
    if (major.empty() || major != own.substr(0, own.find('.'))) {
        fail(errc::version_mismatch,
             "file version '" + version + "' is incompatible with " + kVersion);
    }
    if (doc.value("kind", "") != expected_kind) {
        fail(errc::invalid_argument, "'" + path + "' holds a '" + doc.value("kind", "?") +
                                         "' model, expected '" + expected_kind + "'");
    }
    return doc;
}

} // namespace

void save_network(const Network& net, const std::string& path) {
    net.validate();
    json doc = document_shell("network");
    json layers = json::array();
    for (const Layer& l : net.layers) {
        json jl;
        jl["kind"] = layer_kind_name(l.kind);
        jl["degree"] = l.degree;
        jl["train_kernel"] = l.train_kernel;
        jl["w"] = matrix_to_json(l.w);
        jl["b"] = matrix_to_json(l.b);
        jl["centers"] = matrix_to_json(l.centers);
        jl["sigma"] = matrix_to_json(l.sigma);
        jl["alpha"] = matrix_to_json(l.alpha);
        jl["mask"] = matrix_to_json(l.mask);
        layers.push_back(std::move(jl));
    }
    doc["network"]["layers"] = std::move(layers);
    write_document(doc, path);
}

Network load_network(const std::string& path) {
    const json doc = read_document(path, "network");
    Network net;
    try {
        for (const json& jl : doc.at("network").at("layers")) {
            Layer l;
            l.kind = kind_from_name(jl.at("kind").get<std::string>());
            l.degree = jl.at("degree").get<unsigned>();
            l.train_kernel = jl.at("train_kernel").get<bool>();
            l.w = matrix_from_json(jl.at("w"));
            l.b = matrix_from_json(jl.at("b"));
            l.centers = matrix_from_json(jl.at("centers"));
            l.sigma = matrix_from_json(jl.at("sigma"));
            l.alpha = matrix_from_json(jl.at("alpha"));
            l.mask = matrix_from_json(jl.at("mask"));
            net.layers.push_back(std::move(l));
        }
    } catch (const json::exception& e) {
        fail(errc::parse_error, "'" + path + "' is missing model fields: " + e.what());
    }
    net.validate();
    return net;
}

void save_pca(const PCAModel& model, const std::string& path) {
    json doc = document_shell("pca");
    doc["pca"]["mean"] = matrix_to_json(model.mean);
    doc["pca"]["components"] = matrix_to_json(model.components);
    doc["pca"]["eigenvalues"] = model.eigenvalues;
    write_document(doc, path);
}

PCAModel load_pca(const std::string& path) {
    const json doc = read_document(path, "pca");
    PCAModel model;
    try {
        const json& p = doc.at("pca");
        model.mean = matrix_from_json(p.at("mean"));
        model.components = matrix_from_json(p.at("components"));
        model.eigenvalues = p.at("eigenvalues").get<std::vector<double>>();
    } catch (const json::exception& e) {
        fail(errc::parse_error, "'" + path + "' is missing model fields: " + e.what());
    }
    if (model.mean.rows() != 1 || model.mean.cols() != model.components.rows() ||
        model.components.cols() > model.components.rows() ||
        model.eigenvalues.size() != model.components.rows()) {
        fail(errc::dimension_mismatch, "projection shapes in '" + path + "' are inconsistent");
    }
    return model;
}

} // namespace geonet
