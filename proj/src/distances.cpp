#include "tsdict/distances.hpp"

namespace tsdict {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::Euclid: return "euclid";
        case Measure::BossDist: return "boss";
        case Measure::HI: return "hi";
        case Measure::Cosine: return "cosine";
    }
    return "?";
}

Measure measure_from_name(const std::string& name) {
    if (name == "euclid") return Measure::Euclid;
    if (name == "boss") return Measure::BossDist;
    if (name == "hi") return Measure::HI;
    if (name == "cosine") return Measure::Cosine;
    throw std::invalid_argument("unknown measure: " + name);
}

}  // namespace tsdict
