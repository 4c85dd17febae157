#include "cqforge/generation/backend.hpp"

#include <regex>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "httplib.h"

namespace cqforge {

namespace {

constexpr std::string_view kCqLead = "As an ontology engineer, generate a list of competency questions";
constexpr std::string_view kDefinitionLead = "You are an ontology engineer.\n";

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string mock_cqs(const std::string& prompt) {
    static const std::regex count_re("Just return ([0-9]+) distinct CQs");
    std::smatch m;
    if (!std::regex_search(prompt, m, count_re)) throw BackendError("mock backend: CQ count not found in prompt");
    const std::size_t n = std::stoul(m[1].str());

    std::vector<std::string> templates;
    bool in_list = false;
    for (const auto& line : lines_of(prompt)) {
        if (line.rfind("Template: - ", 0) == 0) {
            templates.push_back(line.substr(12));
            in_list = true;
        } else if (in_list && line.rfind("- ", 0) == 0) {
            templates.push_back(line.substr(2));
        } else if (in_list) {
            break;
        }
    }
    if (templates.empty()) throw BackendError("mock backend: no templates in prompt");

    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += " | ";
        out += templates[i % templates.size()];
        if (i >= templates.size()) out += " (variant " + std::to_string(i / templates.size() + 1) + ")";
    }
    return out;
}

std::string mock_definition(const std::string& prompt) {
    std::string type;
    std::string name;
    std::vector<std::string> axioms;
    bool in_axioms = false;
    for (const auto& line : lines_of(prompt)) {
        if (in_axioms) {
            if (line.rfind("For example, ", 0) == 0) break;
            axioms.push_back(line);
        } else if (line.rfind("class name: ", 0) == 0 || line.rfind("property name: ", 0) == 0) {
            type = line.substr(0, line.find(' '));
            name = line.substr(line.find(": ") + 2);
        } else if (line.rfind("Axiom set: ", 0) == 0) {
            axioms.push_back(line.substr(11));
            in_axioms = true;
        }
    }
    if (type.empty() || axioms.empty()) throw BackendError("mock backend: malformed definition prompt");
    std::string out = name + " is a " + type + " characterized by the following axioms: ";
    for (std::size_t i = 0; i < axioms.size(); ++i) {
        if (i) out += "; ";
        out += axioms[i];
    }
    return out + ".";
}

}  // namespace

std::string MockTextBackend::complete(const std::string& prompt, std::optional<double>, std::uint64_t) const {
    if (prompt.rfind(kCqLead, 0) == 0) return mock_cqs(prompt);
    if (prompt.rfind(kDefinitionLead, 0) == 0) return mock_definition(prompt);
    throw BackendError("mock backend: unrecognised prompt");
}

std::pair<std::string, std::string> split_http_url(const std::string& url) {
    static const std::regex url_re(R"(^(http://[^/\s:]+(:[0-9]+)?)(/[^\s]*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, url_re)) throw std::invalid_argument("unsupported backend URL: " + url);
    return {m[1].str(), m[3].matched ? m[3].str() : "/"};
}

HttpTextBackend::HttpTextBackend(std::string url, std::string api_key, int timeout_seconds)
    : url_(std::move(url)), api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
    std::tie(origin_, path_) = split_http_url(url_);
}

std::string HttpTextBackend::complete(const std::string& prompt, std::optional<double> temperature,
                                      std::uint64_t seed) const {
    nlohmann::json body = {{"prompt", prompt}, {"seed", seed}};
    if (temperature) body["temperature"] = *temperature;

    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Connection || err == httplib::Error::ConnectionTimeout) {
            throw BackendUnreachable("text backend unreachable at " + url_);
        }
        throw BackendError("text backend request failed: " + httplib::to_string(err));
    }
    if (res->status != 200) throw BackendError("text backend returned HTTP " + std::to_string(res->status));
    try {
        return nlohmann::json::parse(res->body).at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("text backend: malformed response: ") + e.what());
    }
}

}  // namespace cqforge
