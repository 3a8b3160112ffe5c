#include "cvxhole/error.hpp"

namespace cvxhole {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidBody: return "InvalidBody";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
        case Errc::InvalidTarget: return "InvalidTarget";
        case Errc::TooFewCells: return "TooFewCells";
        case Errc::NotAPartition: return "NotAPartition";
        case Errc::EpsilonTooLarge: return "EpsilonTooLarge";
        case Errc::PreconditionViolation: return "PreconditionViolation";
        case Errc::NetTooLarge: return "NetTooLarge";
        case Errc::WitnessNotFound: return "WitnessNotFound";
        case Errc::TooManyPoints: return "TooManyPoints";
        case Errc::ShapeTooEccentric: return "ShapeTooEccentric";
        case Errc::CoverageViolation: return "CoverageViolation";
        case Errc::Degenerate: return "Degenerate";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace cvxhole
