#include "dmpfem/error.hpp"

namespace dmpfem {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateCell: return "DegenerateCell";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonManifold: return "NonManifold";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MissingBoundaryValue: return "MissingBoundaryValue";
    case ErrorKind::LinearSolveDiverged: return "LinearSolveDiverged";
    case ErrorKind::PicardDiverged: return "PicardDiverged";
    case ErrorKind::UnsupportedCMode: return "UnsupportedCMode";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dmpfem
