#include "telesurg/noise.hpp"

#include <sstream>
#include <stdexcept>

namespace telesurg {

namespace {

Region op_region(const Operation& op, const std::vector<Region>& qubit_region) {
    auto tag = [&](uint32_t q) {
        if (q >= qubit_region.size())
            throw std::invalid_argument("operation touches untagged qubit " +
                                        std::to_string(q));
        return qubit_region[q];
    };
    Region r = tag(op.q0);
    if (op.is_two_qubit() && tag(op.q1) == Region::Link) r = Region::Link;
    return r;
}

}  // namespace

double region_rate(const Operation& op, const NoiseProfile& profile,
                   const std::vector<Region>& qubit_region) {
    return op_region(op, qubit_region) == Region::Link ? profile.p_link
                                                       : profile.p_bulk;
}

NoisyCircuit apply_noise_profile(const Circuit& circuit, const NoiseProfile& profile,
                                 std::vector<Region> qubit_region) {
    if (profile.p_bulk < 0 || profile.p_bulk >= 0.5 || profile.p_link < 0 ||
        profile.p_link >= 0.5)
        throw std::invalid_argument("noise rates must lie in [0, 0.5)");
    if (qubit_region.size() < circuit.num_qubits)
        throw std::invalid_argument("region tags missing for some qubits");

    NoisyCircuit noisy;
    noisy.base = circuit;
    noisy.profile = profile;
    noisy.qubit_region = std::move(qubit_region);
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        const auto& op = circuit.ops[i];
        if (op.type == OpType::Tick) continue;
        NoiseChannel ch;
        ch.op_index = uint32_t(i);
        ch.region = op_region(op, noisy.qubit_region);
        ch.p = ch.region == Region::Link ? profile.p_link : profile.p_bulk;
        switch (op.type) {
            case OpType::H: ch.kind = ChannelKind::Depolarize1; break;
            case OpType::CX: ch.kind = ChannelKind::Depolarize2; break;
            case OpType::ResetZ:
            case OpType::ResetX: ch.kind = ChannelKind::FlipInit; break;
            case OpType::MeasureZ:
            case OpType::MeasureX: ch.kind = ChannelKind::FlipMeasure; break;
            case OpType::Tick: continue;
        }
        noisy.channels.push_back(ch);
    }
    return noisy;
}

NoisyCircuit apply_noise_profile(const NoisyCircuit& noisy, const NoiseProfile& profile) {
    return apply_noise_profile(noisy.base, profile, noisy.qubit_region);
}

std::string noisy_circuit_text(const NoisyCircuit& noisy) {
    std::ostringstream os;
    os << "telesurg-noisy-circuit v1\n";
    os << "p_bulk " << noisy.profile.p_bulk << "\n";
    os << "p_link " << noisy.profile.p_link << "\n";
    std::size_t ch = 0;
    std::string base = circuit_text(noisy.base);
    // Re-emit the base text with channel annotations inline.
    std::istringstream is(base);
    std::string line;
    std::size_t op_index = 0;
    bool in_ops = false;
    while (std::getline(is, line)) {
        bool is_op = line.rfind("RZ", 0) == 0 || line.rfind("RX", 0) == 0 ||
                     line.rfind("H ", 0) == 0 || line.rfind("CX", 0) == 0 ||
                     line.rfind("MZ", 0) == 0 || line.rfind("MX", 0) == 0 ||
                     line == "TICK";
        if (is_op) in_ops = true;
        if (in_ops && is_op) {
            if (line != "TICK" && ch < noisy.channels.size() &&
                noisy.channels[ch].op_index == op_index) {
                const auto& c = noisy.channels[ch++];
                const char* kind = nullptr;
                switch (c.kind) {
                    case ChannelKind::Depolarize1: kind = "DEPOLARIZE1"; break;
                    case ChannelKind::Depolarize2: kind = "DEPOLARIZE2"; break;
                    case ChannelKind::FlipInit: kind = "FLIP_INIT"; break;
                    case ChannelKind::FlipMeasure: kind = "FLIP_MEASURE"; break;
                }
                os << line << " !" << kind << "(" << c.p << ")\n";
            } else {
                os << line << "\n";
            }
            ++op_index;
        } else {
            os << line << "\n";
        }
    }
    return os.str();
}

}  // namespace telesurg
