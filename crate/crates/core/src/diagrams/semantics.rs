use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Diagram, FiniteFunction, Variant};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::{Error, Result};

/// Numbers of input (top) and output (bottom) wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interface {
    pub inputs: usize,
    pub outputs: usize,
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.inputs, self.outputs)
    }
}

fn allowed(variant: Variant, d: &Diagram) -> Result<()> {
    let (ok, name) = match d {
        Diagram::Sigma => (variant.sigma, "sigma"),
        Diagram::Delta => (variant.delta, "delta"),
        Diagram::Epsilon => (variant.epsilon, "eps"),
        _ => (true, ""),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotInVariant { combinator: name, variant: variant.to_string() })
    }
}

/// The interface of `d`, rejecting combinators outside `variant` and
/// vertical composites whose wire counts disagree.
pub fn typecheck(d: &Diagram, variant: Variant) -> Result<Interface> {
    allowed(variant, d)?;
    let i = |inputs, outputs| Ok(Interface { inputs, outputs });
    match d {
        Diagram::Sigma => i(2, 2),
        Diagram::Delta => i(1, 2),
        Diagram::Epsilon => i(1, 0),
        Diagram::Id(k) => i(*k, *k),
        Diagram::Gen(_) => i(1, 1),
        Diagram::Vert(upper, lower) => {
            let a = typecheck(upper, variant)?;
            let b = typecheck(lower, variant)?;
            if a.outputs != b.inputs {
                return Err(Error::Type(format!(
                    "'{upper}' has {} outputs but '{lower}' has {} inputs",
                    a.outputs, b.inputs
                )));
            }
            i(a.inputs, b.outputs)
        }
        Diagram::Horiz(left, right) => {
            let a = typecheck(left, variant)?;
            let b = typecheck(right, variant)?;
            i(a.inputs + b.inputs, a.outputs + b.outputs)
        }
    }
}

fn interpret(d: &Diagram) -> Result<FiniteFunction> {
    Ok(match d {
        Diagram::Sigma => FiniteFunction { dom: 2, cod: 2, table: vec![1, 0] },
        Diagram::Delta => FiniteFunction { dom: 2, cod: 1, table: vec![0, 0] },
        Diagram::Epsilon => FiniteFunction { dom: 0, cod: 1, table: vec![] },
        Diagram::Id(k) => FiniteFunction::identity(*k),
        Diagram::Gen(name) => {
            return Err(Error::InvalidInput(format!("gen({name}) needs a base category")));
        }
        Diagram::Vert(upper, lower) => interpret(upper)?.after(&interpret(lower)?)?,
        Diagram::Horiz(left, right) => interpret(left)?.sum(&interpret(right)?),
    })
}

/// The function `{0..outputs-1} → {0..inputs-1}` a diagram over the base
/// 1 denotes.
pub fn to_function(d: &Diagram) -> Result<FiniteFunction> {
    typecheck(d, Variant::FULL)?;
    interpret(d)
}

/// Membership of `f` in the function class of a table row.
pub fn classify(f: &FiniteFunction, variant: Variant) -> Result<bool> {
    if !variant.is_classified() {
        return Err(Error::NotInTable(variant.to_string()));
    }
    Ok(variant.function_class().contains(f))
}

/// Canonical representative of a diagram modulo the equations of its
/// variant. `base_family[j]` is the base morphism carried by output wire
/// `j`, from the object of input `shape(j)` to the object of output `j`;
/// it is empty over the base 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub variant: Variant,
    pub shape: FiniteFunction,
    pub base_family: Vec<MorId>,
}

impl NormalForm {
    /// A diagram with this normal form: the synthesized shape above one
    /// layer of base morphisms (identities become plain wires).
    pub fn to_diagram(&self, base: Option<&FinCategory>) -> Result<Diagram> {
        let top = synthesize(&self.shape, self.variant)?;
        let Some(c) = base else {
            return Ok(top);
        };
        if self.base_family.iter().all(|&m| c.is_identity(m)) {
            return Ok(top);
        }
        let layer = Diagram::horiz_all(self.base_family.iter().map(|&m| {
            if c.is_identity(m) {
                Diagram::Id(1)
            } else {
                Diagram::Gen(c.morphism(m).name.clone())
            }
        }));
        Ok(Diagram::vert(top, layer))
    }

    pub fn display(&self, base: Option<&FinCategory>) -> String {
        match base {
            Some(c) if !self.base_family.is_empty() => {
                let names: Vec<&str> = self.base_family.iter().map(|&m| c.morphism(m).name.as_str()).collect();
                format!("{} ; [{}]", self.shape, names.join(", "))
            }
            _ => self.shape.to_string(),
        }
    }
}

#[derive(Clone, Copy)]
struct Wire {
    input: usize,
    acc: MorId,
    obj: ObjId,
}

fn trace(d: &Diagram, c: &FinCategory, wires: Vec<Wire>) -> Result<Vec<Wire>> {
    let arity = |d: &Diagram| typecheck(d, Variant::FULL).map(|i| i.inputs);
    Ok(match d {
        Diagram::Sigma => vec![wires[1], wires[0]],
        Diagram::Delta => vec![wires[0], wires[0]],
        Diagram::Epsilon => vec![],
        Diagram::Id(_) => wires,
        Diagram::Gen(name) => {
            let m = c.morphism_by_name(name).ok_or_else(|| Error::InvalidInput(format!("unknown morphism {name}")))?;
            let w = wires[0];
            if c.src(m) != w.obj {
                return Err(Error::Type(format!(
                    "gen({name}) expects a wire of type {} but receives {}",
                    c.object_name(c.src(m)),
                    c.object_name(w.obj)
                )));
            }
            let acc = c.compose(m, w.acc).expect("composable");
            vec![Wire { input: w.input, acc, obj: c.tgt(m) }]
        }
        Diagram::Vert(upper, lower) => trace(lower, c, trace(upper, c, wires)?)?,
        Diagram::Horiz(left, right) => {
            let k = arity(left)?;
            let mut rest = wires;
            let second = rest.split_off(k);
            let mut out = trace(left, c, rest)?;
            out.extend(trace(right, c, second)?);
            out
        }
    })
}

/// Normal form over the base 1.
pub fn normalize(d: &Diagram, variant: Variant) -> Result<NormalForm> {
    variant.require_monad()?;
    typecheck(d, variant)?;
    let shape = interpret(d)?;
    assert!(variant.function_class().contains(&shape), "well-typed diagram left its function class");
    Ok(NormalForm { variant, shape, base_family: Vec::new() })
}

/// Normal form over a finite base category, with input wires typed by
/// `inputs`. Base morphisms are threaded along wires and composed; δ
/// duplicates the accumulated morphism and ε discards it.
pub fn normalize_over(d: &Diagram, variant: Variant, c: &FinCategory, inputs: &[ObjId]) -> Result<NormalForm> {
    variant.require_monad()?;
    let i = typecheck(d, variant)?;
    if i.inputs != inputs.len() {
        return Err(Error::Type(format!("diagram has {} inputs but {} types were given", i.inputs, inputs.len())));
    }
    if let Some(&o) = inputs.iter().find(|&&o| o >= c.object_count()) {
        return Err(Error::InvalidInput(format!("object {o} out of range")));
    }
    let wires = inputs.iter().enumerate().map(|(k, &o)| Wire { input: k, acc: c.identity(o), obj: o }).collect();
    let out = trace(d, c, wires)?;
    let shape = FiniteFunction { dom: out.len(), cod: inputs.len(), table: out.iter().map(|w| w.input).collect() };
    assert!(variant.function_class().contains(&shape), "well-typed diagram left its function class");
    Ok(NormalForm { variant, shape, base_family: out.iter().map(|w| w.acc).collect() })
}

fn same_interface(d1: &Diagram, d2: &Diagram, variant: Variant) -> Result<()> {
    let (a, b) = (typecheck(d1, variant)?, typecheck(d2, variant)?);
    if a != b {
        return Err(Error::Mismatch(format!("interfaces {a} and {b} differ")));
    }
    Ok(())
}

/// Equality modulo the equations of the variant, over the base 1.
pub fn diagrams_equal(d1: &Diagram, d2: &Diagram, variant: Variant) -> Result<bool> {
    same_interface(d1, d2, variant)?;
    Ok(normalize(d1, variant)? == normalize(d2, variant)?)
}

pub fn diagrams_equal_over(
    d1: &Diagram,
    d2: &Diagram,
    variant: Variant,
    c: &FinCategory,
    inputs: &[ObjId],
) -> Result<bool> {
    same_interface(d1, d2, variant)?;
    Ok(normalize_over(d1, variant, c, inputs)? == normalize_over(d2, variant, c, inputs)?)
}

fn fan(k: usize) -> Diagram {
    match k {
        0 => Diagram::Epsilon,
        1 => Diagram::Id(1),
        _ => Diagram::vert(Diagram::Delta, Diagram::horiz(fan(k - 1), Diagram::Id(1))),
    }
}

fn swap_layer(width: usize, i: usize) -> Diagram {
    let mut parts = Vec::new();
    if i > 0 {
        parts.push(Diagram::Id(i));
    }
    parts.push(Diagram::Sigma);
    if width > i + 2 {
        parts.push(Diagram::Id(width - i - 2));
    }
    Diagram::horiz_all(parts)
}

/// A diagram using only the combinators of `variant` whose function is
/// `shape`: a layer of duplication/discard trees above a network of
/// adjacent swaps.
pub fn synthesize(shape: &FiniteFunction, variant: Variant) -> Result<Diagram> {
    if !variant.function_class().contains(shape) {
        return Err(Error::OutsideClass(format!("{shape} is not among the {}", variant.function_class().name())));
    }
    let (m, n) = (shape.dom, shape.cod);
    let mut counts = vec![0usize; n];
    for &v in &shape.table {
        counts[v] += 1;
    }
    let top = if counts.iter().all(|&k| k == 1) {
        Diagram::Id(n)
    } else {
        Diagram::horiz_all(counts.iter().map(|&k| fan(k)))
    };
    // Position of each output in the stably sorted order.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&j| shape.table[j]);
    let mut p = vec![0; m];
    for (pos, &j) in order.iter().enumerate() {
        p[j] = pos;
    }
    let mut swaps = Vec::new();
    let mut q = p;
    loop {
        let Some(i) = (0..m.saturating_sub(1)).find(|&i| q[i] > q[i + 1]) else { break };
        q.swap(i, i + 1);
        swaps.push(i);
    }
    let layers = std::iter::once(top).chain(swaps.into_iter().rev().map(|i| swap_layer(m, i)));
    Ok(Diagram::vert_all(layers, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::parse;

    const FIGURE: &str = "(sigma * id[1]) ; (delta * id[1] * eps)";

    fn f(text: &str) -> FiniteFunction {
        to_function(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn figure_function() {
        let d = parse(FIGURE).unwrap();
        assert_eq!(typecheck(&d, Variant::FULL).unwrap(), Interface { inputs: 3, outputs: 3 });
        assert_eq!(f(FIGURE).table, vec![1, 1, 0]);
        assert_eq!(f(FIGURE).to_string(), "0↦1 1↦1 2↦0");
    }

    #[test]
    fn basic_equations() {
        assert!(f("sigma ; sigma").is_identity());
        assert!(f("id[3]").is_identity());
        assert_eq!(
            normalize(&parse("delta ; (eps * id[1])").unwrap(), Variant::FULL).unwrap().shape,
            FiniteFunction::identity(1)
        );
        let yb1 = parse("(sigma * id[1]) ; (id[1] * sigma) ; (sigma * id[1])").unwrap();
        let yb2 = parse("(id[1] * sigma) ; (sigma * id[1]) ; (id[1] * sigma)").unwrap();
        assert!(diagrams_equal(&yb1, &yb2, Variant::SIGMA).unwrap());
        assert!(!diagrams_equal(&parse("id[2]").unwrap(), &Diagram::Sigma, Variant::SIGMA).unwrap());
        assert!(diagrams_equal(&Diagram::Delta, &parse("delta ; sigma").unwrap(), Variant::FULL).unwrap());
        assert!(diagrams_equal(&Diagram::Id(1), &Diagram::Sigma, Variant::SIGMA).is_err());
    }

    #[test]
    fn variant_errors() {
        assert!(matches!(
            typecheck(&Diagram::Delta, Variant::SIGMA),
            Err(Error::NotInVariant { combinator: "delta", .. })
        ));
        let e = typecheck(&Diagram::Delta, Variant::SIGMA).unwrap_err();
        assert_eq!(e.to_string(), "delta not in variant {σ}");
        assert!(matches!(classify(&FiniteFunction::identity(1), Variant::DELTA), Err(Error::NotInTable(_))));
        assert!(matches!(normalize(&Diagram::Delta, Variant::DELTA), Err(Error::NotMonadEnabled(_))));
        assert!(to_function(&parse("gen(f)").unwrap()).is_err());
        assert!(typecheck(&parse("sigma ; delta").unwrap(), Variant::FULL).is_err());
    }

    #[test]
    fn classify_examples() {
        let t = FiniteFunction::new(2, 2, vec![1, 0]).unwrap();
        assert!(classify(&t, Variant::SIGMA).unwrap());
        let c = FiniteFunction::new(2, 2, vec![0, 0]).unwrap();
        assert!(!classify(&c, Variant::SIGMA_EPSILON).unwrap());
        let m = FiniteFunction::new(3, 2, vec![0, 1, 1]).unwrap();
        assert!(classify(&m, Variant::DELTA_EPSILON).unwrap());
    }

    #[test]
    fn synthesis_inverts_semantics() {
        for v in Variant::ALL {
            let class = v.function_class();
            for m in 0..=4 {
                for n in 0..=4 {
                    for shape in class.functions(m, n) {
                        let d = synthesize(&shape, v).unwrap();
                        let i = typecheck(&d, v).unwrap();
                        assert_eq!((i.inputs, i.outputs), (n, m));
                        assert_eq!(interpret(&d).unwrap(), shape, "{v} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn tracing_over_a_base() {
        let c = FinCategory::arrow();
        let (a, b) = (0, 1);
        let f = c.morphism_by_name("f").unwrap();
        let d = parse("gen(f) * id[1] ; delta * id[1]").unwrap();
        let nf = normalize_over(&d, Variant::FULL, &c, &[a, b]).unwrap();
        assert_eq!(nf.shape.table, vec![0, 0, 1]);
        assert_eq!(nf.base_family, vec![f, f, c.identity(b)]);
        // Naturality: the morphism may be applied after duplicating.
        let e = parse("delta * id[1] ; gen(f) * gen(f) * id[1]").unwrap();
        assert!(diagrams_equal_over(&d, &e, Variant::FULL, &c, &[a, b]).unwrap());
        let back = nf.to_diagram(Some(&c)).unwrap();
        assert_eq!(normalize_over(&back, Variant::FULL, &c, &[a, b]).unwrap(), nf);
        assert!(normalize_over(&d, Variant::FULL, &c, &[b, b]).is_err());
    }
}
