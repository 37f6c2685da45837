//! Boolean expressions lowered to NAND-only netlists whose gates can be
//! evaluated through the entropy gate.

mod expr;
mod netlist;

pub use expr::{parse_expression, BoolExpr};
pub use netlist::{
    evaluate_netlist, netlist_report, synthesize_nand_netlist, EvalMode, NandGate, NandNetlist, NetlistReport,
    SignalRef,
};
