use alloc::string::String;
use core::fmt::Write;

use super::Formula;

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(f, Formula::Exists(..) | Formula::Forall(..))
}

/// Writes `f`. `open_right` is true when nothing follows `f` in its enclosing
/// context, which is the only place a quantifier may appear unparenthesised.
fn write(out: &mut String, f: &Formula, open_right: bool) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(i, j) => {
            let _ = write!(out, "v{i} = v{j}");
        }
        Formula::Atom(name, args) => {
            out.push_str(name);
            out.push('(');
            for (k, v) in args.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "v{v}");
            }
            out.push(')');
        }
        Formula::Not(b) => {
            out.push('!');
            child(out, b, level(b) >= UNARY, open_right);
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let _ = write!(out, "{} v{v}. ", if matches!(f, Formula::Exists(..)) { 'E' } else { 'A' });
            write(out, b, open_right);
        }
        Formula::And(l, r) => binary(out, l, r, " & ", AND, false, open_right),
        Formula::Or(l, r) => binary(out, l, r, " | ", OR, false, open_right),
        Formula::Iff(l, r) => binary(out, l, r, " <-> ", IFF, false, open_right),
        Formula::Implies(l, r) => binary(out, l, r, " -> ", IMP, true, open_right),
    }
}

fn binary(out: &mut String, l: &Formula, r: &Formula, op: &str, prec: u8, right_assoc: bool, open_right: bool) {
    let (left_ok, right_ok) =
        if right_assoc { (level(l) > prec, level(r) >= prec) } else { (level(l) >= prec, level(r) > prec) };
    child(out, l, left_ok, false);
    out.push_str(op);
    child(out, r, right_ok, open_right);
}

fn child(out: &mut String, f: &Formula, binds_tightly: bool, open_right: bool) {
    if binds_tightly && (open_right || !is_quantifier(f)) {
        write(out, f, open_right);
    } else {
        out.push('(');
        write(out, f, true);
        out.push(')');
    }
}

/// Canonical text of `f`: minimal parentheses, no simplification.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(&mut out, f, true);
    out
}
