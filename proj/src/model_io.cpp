#include "qnc/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qnc/classifier.hpp"

namespace qnc {

namespace {

using nlohmann::json;

constexpr int format_version = 1;

std::string range_name(AngleRange r) { return r == AngleRange::two_pi ? "2pi" : "pi"; }

AngleRange range_from_name(const std::string& s) {
    if (s == "2pi") return AngleRange::two_pi;
    if (s == "pi") return AngleRange::pi;
    throw std::runtime_error("unknown angle range '" + s + "'");
}

std::string mapping_name(CorrelatorMapping m) {
    return m == CorrelatorMapping::theta_first ? "theta_first" : "phi_first";
}

CorrelatorMapping mapping_from_name(const std::string& s) {
    if (s == "theta_first") return CorrelatorMapping::theta_first;
    if (s == "phi_first") return CorrelatorMapping::phi_first;
    throw std::runtime_error("unknown correlator mapping '" + s + "'");
}

}  // namespace

std::string model_to_json(const Model& model) {
    const ModelLayout layout = compute_layout(model);

    json sublabels = json::array();
    for (const Sublabel& s : model.sublabels) {
        json thetas = json::array();
        json phis = json::array();
        for (const BlochAngles& a : s.centroid) {
            thetas.push_back(a.theta);
            phis.push_back(a.phi);
        }
        sublabels.push_back({{"theta_m", thetas},
                             {"phi_m", phis},
                             {"n", s.member_count},
                             {"d", s.cone_radius},
                             {"prior_label", s.prior_label}});
    }

    json j{{"version", format_version},
           {"dims", model.dims},
           {"bounds", model.bounds},
           {"d_threshold", model.acceptance_threshold},
           {"labels", model.labels},
           {"sublabels", sublabels},
           {"layout",
            {{"n_label_qubits", layout.n_label_qubits},
             {"class_counts", layout.class_counts},
             {"index_of_sublabel", layout.index_of_sublabel}}},
           {"weights", model.weights},
           {"fixpoint",
            {{"converged", model.fixpoint.converged}, {"iterations", model.fixpoint.iterations}}},
           {"rng_seed", model.rng_seed}};
    if (model.dims == 2) {
        j["angle_range"] = range_name(model.angle_range);
    } else {
        j["mapping"] = mapping_name(model.mapping);
    }
    return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("model parse error: ") + e.what());
    }

    try {
        if (j.at("version").get<int>() != format_version) {
            throw std::runtime_error("unsupported model version");
        }
        Model m;
        m.dims = j.at("dims").get<int>();
        if (m.dims != 2 && m.dims != 4) throw std::runtime_error("model dims must be 2 or 4");
        m.bounds = j.at("bounds").get<std::vector<std::array<double, 2>>>();
        if (m.bounds.size() != static_cast<std::size_t>(m.dims)) {
            throw std::runtime_error("bounds do not match model dimensions");
        }
        m.acceptance_threshold = j.at("d_threshold").get<double>();
        if (m.dims == 2) {
            m.angle_range = range_from_name(j.at("angle_range").get<std::string>());
        } else {
            m.mapping = mapping_from_name(j.at("mapping").get<std::string>());
        }
        m.labels = j.at("labels").get<std::vector<std::string>>();

        const std::size_t qubits = static_cast<std::size_t>(m.n_data_qubits());
        for (const json& js : j.at("sublabels")) {
            Sublabel s;
            const auto thetas = js.at("theta_m").get<std::vector<double>>();
            const auto phis = js.at("phi_m").get<std::vector<double>>();
            if (thetas.size() != qubits || phis.size() != qubits) {
                throw std::runtime_error("sublabel angle arity does not match model dims");
            }
            for (std::size_t q = 0; q < qubits; ++q) s.centroid.push_back({thetas[q], phis[q]});
            s.member_count = js.at("n").get<std::size_t>();
            s.cone_radius = js.at("d").get<double>();
            s.prior_label = js.at("prior_label").get<std::string>();
            if (s.member_count == 0) throw std::runtime_error("sublabel with zero members");
            if (!(s.cone_radius > 0.0 && s.cone_radius <= 1.0)) {
                throw std::runtime_error("sublabel cone radius outside (0, 1]");
            }
            m.sublabels.push_back(std::move(s));
        }
        if (m.sublabels.empty()) throw std::runtime_error("model has no sublabels");

        m.weights = j.at("weights").get<std::vector<double>>();
        m.fixpoint.converged = j.at("fixpoint").at("converged").get<bool>();
        m.fixpoint.iterations = j.at("fixpoint").at("iterations").get<int>();
        m.rng_seed = j.at("rng_seed").get<std::uint64_t>();

        // Stored layout must agree with the one this build derives.
        const ModelLayout layout = compute_layout(m);
        const json& jl = j.at("layout");
        if (jl.at("n_label_qubits").get<int>() != layout.n_label_qubits ||
            jl.at("class_counts").get<std::array<std::size_t, 2>>() != layout.class_counts ||
            jl.at("index_of_sublabel").get<std::vector<std::uint64_t>>() !=
                layout.index_of_sublabel) {
            throw std::runtime_error("stored layout is inconsistent with the sublabel list");
        }
        return m;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model parse error: ") + e.what());
    }
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << model_to_json(model);
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

Model load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace qnc
