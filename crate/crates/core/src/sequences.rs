//! Assembly of the four exact sequences of groups attached to an extension
//! and verification of exactness at every interior node, with machine-readable
//! witnesses for failures, plus the closing diagram that displays all four.
//!
//! The two terminal Picard nodes are verdict-only: exactness there needs only
//! class-triviality tests (`[X] = [R]`, `[S_phi] = [S]`, ...), decided by
//! isomorphism search, never a full enumeration of a Picard group. Coverage
//! of the coupling-class group is over the subgroup generated by the two
//! canonical families, which is exactly what the kernel statements quantify
//! over at this scale; every report carries a note to that effect.

use crate::algebra::Extension;
use crate::auts::{
    aut_r_rings, aut_s_r, bilinear_aut_from_twist_iso, d_hom, hat_hom, ker_d_report,
    ker_hat_report, twist_class, AutGroup, KerDReport, KerHatReport,
};
use crate::bimodule::{iso_search, sub_bimodule_of_s, Bimodule, Side};
use crate::coupling::{
    class_witness, coupling_to_invertible_sub, coupling_to_ring_aut, generate_class_group,
    inclusion_coupling, neutral_coupling, p_trivial_witness, twist_coupling, x_trivial_witness,
    ClassGroup, CLASS_CAP,
};
use crate::error::{Error, Result};
use crate::group::{exact_at, FiniteGroup, GroupHom};
use crate::inv::{inv_group, InvGroup};
use serde::Serialize;

const SCOPE_NOTE: &str = "coupling-class coverage is over the subgroup generated by the \
    inclusion and twist families; classes outside it are not decidable by enumeration";

#[derive(Debug, Clone, Serialize)]
pub struct NodeInfo {
    pub name: String,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub position: usize,
    pub pass: bool,
    pub witnesses: Vec<String>,
    #[serde(skip)]
    pub label: String,
}

impl Verdict {
    fn checked(position: usize, label: &str, pass: bool, witnesses: Vec<String>) -> Verdict {
        Verdict { position, pass, witnesses, label: label.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceReport {
    pub sequence: u8,
    pub nodes: Vec<NodeInfo>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl SequenceReport {
    fn finish(sequence: u8, nodes: Vec<NodeInfo>, verdicts: Vec<Verdict>, notes: Vec<String>) -> Self {
        let pass = verdicts.iter().all(|v| v.pass);
        SequenceReport { sequence, nodes, verdicts, notes, pass }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.nodes.iter().map(|n| n.name.as_str()).collect();
        out.push_str(&format!("sequence {}: {}\n", self.sequence, names.join(" -> ")));
        for n in &self.nodes {
            if let Some(order) = n.order {
                out.push_str(&format!("  |{}| = {}\n", n.name, order));
            }
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "  [{}] {}\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.label
            ));
            for w in &v.witnesses {
                out.push_str(&format!("      witness: {w}\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&format!(
            "  sequence {}: {}\n",
            self.sequence,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Everything the four sequences share, computed once per extension.
pub struct Tables {
    pub aut: AutGroup,
    pub rings: AutGroup,
    pub inv: InvGroup,
    pub d: GroupHom,
    pub hat: GroupHom,
    pub ker_d: KerDReport,
    pub ker_hat: KerHatReport,
    pub classes: std::result::Result<ClassGroup, String>,
}

impl Tables {
    pub fn new(ext: &Extension) -> Result<Tables> {
        let aut = aut_s_r(ext)?;
        let rings = aut_r_rings(ext)?;
        let inv = inv_group(ext)?;
        let d = d_hom(ext, &aut, &inv)?;
        let hat = hat_hom(ext, &aut, &rings)?;
        let ker_d = ker_d_report(ext, &aut, &d)?;
        let ker_hat = ker_hat_report(ext, &aut, &hat)?;
        let classes = build_classes(ext, &inv, &rings).map_err(|e| e.to_string());
        Ok(Tables { aut, rings, inv, d, hat, ker_d, ker_hat, classes })
    }
}

fn build_classes(ext: &Extension, inv: &InvGroup, rings: &AutGroup) -> Result<ClassGroup> {
    let mut generators = Vec::new();
    for e in &inv.elems {
        generators.push(inclusion_coupling(ext, e)?);
    }
    for gamma in &rings.mats {
        generators.push(twist_coupling(ext, gamma)?);
    }
    generate_class_group(ext, generators, CLASS_CAP)
}

fn inclusion_hom(sub: &FiniteGroup, whole: &FiniteGroup) -> Result<GroupHom> {
    GroupHom::new(sub.clone(), whole.clone(), |k| k.to_vec())
}

fn set_diff_witnesses(
    left_name: &str,
    left: &[Vec<u8>],
    right_name: &str,
    right: &[Vec<u8>],
    describe: impl Fn(&[u8]) -> String,
) -> Vec<String> {
    let mut out = Vec::new();
    for k in left.iter().filter(|k| !right.contains(k)) {
        out.push(format!("{} but not {}: {}", left_name, right_name, describe(k)));
    }
    for k in right.iter().filter(|k| !left.contains(k)) {
        out.push(format!("{} but not {}: {}", right_name, left_name, describe(k)));
    }
    out
}

/// `{ X in Inv : [X] = [R] in Pic(R) }`, decided by isomorphism search.
fn pic_r_trivial_keys(ext: &Extension, inv: &InvGroup) -> Result<Vec<Vec<u8>>> {
    let r_reg = Bimodule::regular(ext.r());
    let mut keys = Vec::new();
    for e in &inv.elems {
        let module = sub_bimodule_of_s(ext, &e.sub)?.module;
        if iso_search(&module, &r_reg, Side::Both)?.is_some() {
            keys.push(e.key());
        }
    }
    keys.sort();
    Ok(keys)
}

fn exactness_verdict(
    position: usize,
    label: &str,
    f: &GroupHom,
    g: &GroupHom,
    describe: impl Fn(&[u8]) -> String,
) -> Result<Verdict> {
    let report = exact_at(f, g)?;
    let mut witnesses: Vec<String> = report
        .image_not_in_kernel
        .iter()
        .map(|k| format!("image element not in kernel: {}", describe(k)))
        .collect();
    witnesses.extend(
        report
            .kernel_not_in_image
            .iter()
            .map(|k| format!("kernel element not in image: {}", describe(k))),
    );
    Ok(Verdict::checked(position, label, report.pass, witnesses))
}

/// First sequence: `1 -> Ker(D) -> Aut_SR(S) -> Inv(R<=S) -> Pic(R)`,
/// with the corner-unit kernel characterization and centrality.
pub fn seq1(ext: &Extension) -> Result<SequenceReport> {
    let t = Tables::new(ext)?;
    seq1_with(ext, &t)
}

pub fn seq1_with(ext: &Extension, t: &Tables) -> Result<SequenceReport> {
    let nodes = vec![
        NodeInfo { name: "1".into(), order: Some(1) },
        NodeInfo { name: "Ker(D)".into(), order: Some(t.ker_d.kernel.order()) },
        NodeInfo { name: "Aut_SR(S)".into(), order: Some(t.aut.order()) },
        NodeInfo { name: "Inv(R<=S)".into(), order: Some(t.inv.order()) },
        NodeInfo { name: "Pic(R)".into(), order: None },
    ];
    let describe_aut = |k: &[u8]| t.aut.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());
    let describe_inv =
        |k: &[u8]| t.inv.by_key(k).map_or_else(|| format!("{k:?}"), |e| e.sub.render());
    let mut verdicts = Vec::new();
    let incl = inclusion_hom(&t.ker_d.kernel, &t.aut.group)?;
    verdicts.push(Verdict::checked(
        1,
        "exactness at Ker(D): the inclusion is injective",
        incl.kernel().order() == 1,
        Vec::new(),
    ));
    verdicts.push(exactness_verdict(
        2,
        "exactness at Aut_SR(S): im(Ker(D) -> Aut) = ker(D)",
        &incl,
        &t.d,
        describe_aut,
    )?);
    let image_keys: Vec<Vec<u8>> = {
        let mut ks = t.d.image().keys().to_vec();
        ks.sort();
        ks
    };
    let kernel_keys = pic_r_trivial_keys(ext, &t.inv)?;
    let witnesses = set_diff_witnesses(
        "im(D)",
        &image_keys,
        "ker([-])",
        &kernel_keys,
        describe_inv,
    );
    verdicts.push(Verdict::checked(
        3,
        "exactness at Inv(R<=S): im(D) = { X : [X] = [R] }",
        witnesses.is_empty(),
        witnesses,
    ));
    verdicts.push(Verdict::checked(
        4,
        "Ker(D) = { lambda : lambda(e) in U(Z(eRe)) for all local units e }",
        t.ker_d.characterization_holds,
        t.ker_d.witnesses.clone(),
    ));
    verdicts.push(Verdict::checked(
        5,
        "Ker(D) is contained in the center of Aut_SR(S)",
        t.ker_d.central_in_aut,
        Vec::new(),
    ));
    verdicts.push(Verdict::checked(
        6,
        "lambda(e) lambda^-1(e) = e = lambda^-1(e) lambda(e) for all lambda, e",
        t.ker_d.unit_exchange_holds,
        Vec::new(),
    ));
    Ok(SequenceReport::finish(1, nodes, verdicts, vec![SCOPE_NOTE.into()]))
}

/// Second sequence: `1 -> Ker(hat) -> Aut_SR(S) -> Aut_Rrings(S) -> Pic(S)`,
/// with both kernel characterizations and the constructive reduction of every
/// trivialized twist.
pub fn seq2(ext: &Extension) -> Result<SequenceReport> {
    let t = Tables::new(ext)?;
    seq2_with(ext, &t)
}

pub fn seq2_with(ext: &Extension, t: &Tables) -> Result<SequenceReport> {
    let nodes = vec![
        NodeInfo { name: "1".into(), order: Some(1) },
        NodeInfo { name: "Ker(hat)".into(), order: Some(t.ker_hat.kernel.order()) },
        NodeInfo { name: "Aut_SR(S)".into(), order: Some(t.aut.order()) },
        NodeInfo { name: "Aut_Rrings(S)".into(), order: Some(t.rings.order()) },
        NodeInfo { name: "Pic(S)".into(), order: None },
    ];
    let describe_aut = |k: &[u8]| t.aut.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());
    let describe_ring =
        |k: &[u8]| t.rings.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());
    let mut verdicts = Vec::new();
    let incl = inclusion_hom(&t.ker_hat.kernel, &t.aut.group)?;
    verdicts.push(Verdict::checked(
        1,
        "exactness at Ker(hat): the inclusion is injective",
        incl.kernel().order() == 1,
        Vec::new(),
    ));
    verdicts.push(exactness_verdict(
        2,
        "exactness at Aut_SR(S): im(Ker(hat) -> Aut) = ker(hat)",
        &incl,
        &t.hat,
        describe_aut,
    )?);

    // kernel of the twist-class map, with witnesses retained for reduction
    let mut twist_kernel_keys = Vec::new();
    let mut reductions_ok = true;
    let mut reduction_witnesses = Vec::new();
    for (key, gamma) in t.rings.group.keys().iter().zip(&t.rings.mats) {
        let tc = twist_class(ext, gamma)?;
        if let Some(omega) = tc.trivial_witness {
            twist_kernel_keys.push(key.clone());
            match bilinear_aut_from_twist_iso(ext, gamma, &omega) {
                Ok(lam) => {
                    if !t.aut.group.contains(&lam.key())
                        || t.hat.apply(&lam.key()) != key.as_slice()
                    {
                        reductions_ok = false;
                        reduction_witnesses.push(format!(
                            "reduced automorphism of {} does not induce it back",
                            gamma.render()
                        ));
                    }
                }
                Err(e) => {
                    reductions_ok = false;
                    reduction_witnesses.push(format!("reduction failed: {e}"));
                }
            }
        }
    }
    twist_kernel_keys.sort();
    let mut image_keys = t.hat.image().keys().to_vec();
    image_keys.sort();
    let witnesses = set_diff_witnesses(
        "im(hat)",
        &image_keys,
        "ker([S_-])",
        &twist_kernel_keys,
        describe_ring,
    );
    verdicts.push(Verdict::checked(
        3,
        "exactness at Aut_Rrings(S): im(hat) = { phi : [S_phi] = [S] }",
        witnesses.is_empty(),
        witnesses,
    ));
    verdicts.push(Verdict::checked(
        4,
        "every trivialized twist reduces to a bilinear automorphism inducing it",
        reductions_ok,
        reduction_witnesses,
    ));
    verdicts.push(Verdict::checked(
        5,
        "Ker(hat) = { lambda : lambda(e) in U(Z(eSe)) for all local units e }",
        t.ker_hat.corner_characterization_holds,
        t.ker_hat.witnesses.clone(),
    ));
    verdicts.push(Verdict::checked(
        6,
        "Ker(hat) equals the invertible S-bilinear endomorphisms of S",
        t.ker_hat.bilinear_characterization_holds,
        Vec::new(),
    ));
    // the twist-class map is multiplicative at class level
    let mut hom_ok = true;
    let mut hom_witnesses = Vec::new();
    for a in &t.rings.mats {
        for b in &t.rings.mats {
            let composed = a.mul(b);
            let s_reg = Bimodule::regular(ext.s());
            let lhs = crate::bimodule::twist(&s_reg, &composed)?;
            let ta = crate::bimodule::twist(&s_reg, a)?;
            let tb = crate::bimodule::twist(&s_reg, b)?;
            let prod = crate::tensor::tensor_over(ext.s(), &ta, &tb)?;
            if iso_search(&lhs, &prod.module, Side::Both)?.is_none() {
                hom_ok = false;
                hom_witnesses.push(format!(
                    "[S_(phi psi)] differs from [S_phi (x) S_psi] for {} and {}",
                    a.render(),
                    b.render()
                ));
            }
        }
    }
    verdicts.push(Verdict::checked(
        7,
        "[S_(phi psi)] = [S_phi (x)_S S_psi] on all pairs",
        hom_ok,
        hom_witnesses,
    ));
    Ok(SequenceReport::finish(2, nodes, verdicts, vec![SCOPE_NOTE.into()]))
}

fn intersection_group(t: &Tables) -> Result<FiniteGroup> {
    let keys: Vec<Vec<u8>> = t
        .ker_d
        .kernel
        .keys()
        .iter()
        .filter(|k| t.ker_hat.kernel.contains(k))
        .cloned()
        .collect();
    t.aut.group.subgroup(keys)
}

fn classes_or_failed_report(
    sequence: u8,
    nodes: Vec<NodeInfo>,
    err: &str,
) -> SequenceReport {
    SequenceReport::finish(
        sequence,
        nodes,
        vec![Verdict::checked(
            1,
            "coupling-class group generation",
            false,
            vec![err.to_string()],
        )],
        vec![SCOPE_NOTE.into()],
    )
}

/// Third sequence:
/// `1 -> Ker(D) & Ker(hat) -> Ker(hat) -> Inv(R<=S) -> P(S/R) -> Pic(S)`.
pub fn seq3(ext: &Extension) -> Result<SequenceReport> {
    let t = Tables::new(ext)?;
    seq3_with(ext, &t)
}

pub fn seq3_with(ext: &Extension, t: &Tables) -> Result<SequenceReport> {
    let inter = intersection_group(t)?;
    let mut nodes = vec![
        NodeInfo { name: "1".into(), order: Some(1) },
        NodeInfo { name: "Ker(D)&Ker(hat)".into(), order: Some(inter.order()) },
        NodeInfo { name: "Ker(hat)".into(), order: Some(t.ker_hat.kernel.order()) },
        NodeInfo { name: "Inv(R<=S)".into(), order: Some(t.inv.order()) },
        NodeInfo { name: "P(S/R)".into(), order: None },
        NodeInfo { name: "Pic(S)".into(), order: None },
    ];
    let classes = match &t.classes {
        Ok(c) => c,
        Err(e) => return Ok(classes_or_failed_report(3, nodes, e)),
    };
    nodes[4].order = Some(classes.order());
    let describe_aut = |k: &[u8]| t.aut.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());
    let describe_inv =
        |k: &[u8]| t.inv.by_key(k).map_or_else(|| format!("{k:?}"), |e| e.sub.render());

    let mut verdicts = Vec::new();
    let incl = inclusion_hom(&inter, &t.ker_hat.kernel)?;
    let d_slash = GroupHom::new(t.ker_hat.kernel.clone(), t.inv.group.clone(), |k| {
        t.d.apply(k).to_vec()
    })?;
    verdicts.push(Verdict::checked(
        1,
        "exactness at Ker(D)&Ker(hat): the inclusion is injective",
        incl.kernel().order() == 1,
        Vec::new(),
    ));
    verdicts.push(exactness_verdict(
        2,
        "exactness at Ker(hat): ker(D restricted) = Ker(D)&Ker(hat)",
        &incl,
        &d_slash,
        describe_aut,
    )?);

    // exactness at Inv: im(D_/) = ker(D')
    let neutral = neutral_coupling(ext)?;
    let mut ker_dprime = Vec::new();
    for e in &t.inv.elems {
        let c = inclusion_coupling(ext, e)?;
        if class_witness(ext, &c, &neutral)?.is_some() {
            ker_dprime.push(e.key());
        }
    }
    ker_dprime.sort();
    let mut image_keys = d_slash.image().keys().to_vec();
    image_keys.sort();
    let witnesses =
        set_diff_witnesses("im(D_/)", &image_keys, "ker(D')", &ker_dprime, describe_inv);
    verdicts.push(Verdict::checked(
        3,
        "exactness at Inv(R<=S): im(D restricted to Ker(hat)) = ker(D')",
        witnesses.is_empty(),
        witnesses,
    ));

    // exactness at P(S/R): ker(O_r) = im(D') within the generated subgroup
    let mut im_dprime: Vec<Vec<u8>> = Vec::new();
    let mut dprime_mult_ok = true;
    let mut dprime_witnesses = Vec::new();
    let mut inv_to_class: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    for e in &t.inv.elems {
        let c = inclusion_coupling(ext, e)?;
        let key = classes.identify(ext, &c)?.ok_or_else(|| {
            Error::CoherenceFailure("inclusion class missing from generated subgroup".into())
        })?;
        inv_to_class.push((e.key(), key.clone()));
        im_dprime.push(key);
    }
    // D' is multiplicative at class level
    for (ka, ca) in &inv_to_class {
        for (kb, cb) in &inv_to_class {
            let prod_inv = t.inv.group.mul(ka, kb).expect("closure").to_vec();
            let expected = &inv_to_class
                .iter()
                .find(|(k, _)| k == &prod_inv)
                .expect("Inv closure")
                .1;
            let got = classes.group.mul(ca, cb).expect("class closure");
            if got != expected.as_slice() {
                dprime_mult_ok = false;
                dprime_witnesses.push(format!(
                    "D'(X X') differs from D'(X) D'(X') for {} and {}",
                    describe_inv(ka),
                    describe_inv(kb)
                ));
            }
        }
    }
    im_dprime.sort();
    im_dprime.dedup();
    let mut ker_or: Vec<Vec<u8>> = Vec::new();
    let mut reduction_ok = true;
    let mut reduction_witnesses = Vec::new();
    for (rep, key) in classes.reps.iter().zip(&classes.rep_keys) {
        if let Some(beta) = x_trivial_witness(ext, rep)? {
            ker_or.push(key.clone());
            match coupling_to_invertible_sub(ext, rep, &beta) {
                Ok(v) => {
                    if !t.inv.group.contains(&v.key()) {
                        reduction_ok = false;
                        reduction_witnesses
                            .push(format!("reduced subbimodule {} not in Inv", v.sub.render()));
                    }
                }
                Err(e) => {
                    reduction_ok = false;
                    reduction_witnesses.push(format!("reduction failed: {e}"));
                }
            }
        }
    }
    ker_or.sort();
    let describe_class = |k: &[u8]| {
        classes
            .rep_by_key(k)
            .map_or_else(|| format!("{k:?}"), |rep| rep.render())
    };
    let witnesses = set_diff_witnesses("ker(O_r)", &ker_or, "im(D')", &im_dprime, describe_class);
    verdicts.push(Verdict::checked(
        4,
        "exactness at P(S/R): ker(O_r) = im(D') on the generated subgroup",
        witnesses.is_empty(),
        witnesses,
    ));
    verdicts.push(Verdict::checked(
        5,
        "every O_r-trivial class reduces to an invertible subbimodule",
        reduction_ok,
        reduction_witnesses,
    ));
    verdicts.push(Verdict::checked(
        6,
        "D' is multiplicative at class level on all pairs",
        dprime_mult_ok,
        dprime_witnesses,
    ));
    Ok(SequenceReport::finish(3, nodes, verdicts, vec![SCOPE_NOTE.into()]))
}

/// Fourth sequence:
/// `1 -> Ker(D) & Ker(hat) -> Ker(D) -> Aut_Rrings(S) -> P(S/R) -> Pic(R)`.
pub fn seq4(ext: &Extension) -> Result<SequenceReport> {
    let t = Tables::new(ext)?;
    seq4_with(ext, &t)
}

pub fn seq4_with(ext: &Extension, t: &Tables) -> Result<SequenceReport> {
    let inter = intersection_group(t)?;
    let mut nodes = vec![
        NodeInfo { name: "1".into(), order: Some(1) },
        NodeInfo { name: "Ker(D)&Ker(hat)".into(), order: Some(inter.order()) },
        NodeInfo { name: "Ker(D)".into(), order: Some(t.ker_d.kernel.order()) },
        NodeInfo { name: "Aut_Rrings(S)".into(), order: Some(t.rings.order()) },
        NodeInfo { name: "P(S/R)".into(), order: None },
        NodeInfo { name: "Pic(R)".into(), order: None },
    ];
    let classes = match &t.classes {
        Ok(c) => c,
        Err(e) => return Ok(classes_or_failed_report(4, nodes, e)),
    };
    nodes[4].order = Some(classes.order());
    let describe_aut = |k: &[u8]| t.aut.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());
    let describe_ring =
        |k: &[u8]| t.rings.by_key(k).map_or_else(|| format!("{k:?}"), |m| m.render());

    let mut verdicts = Vec::new();
    let incl = inclusion_hom(&inter, &t.ker_d.kernel)?;
    let hat_slash = GroupHom::new(t.ker_d.kernel.clone(), t.rings.group.clone(), |k| {
        t.hat.apply(k).to_vec()
    })?;
    verdicts.push(Verdict::checked(
        1,
        "exactness at Ker(D)&Ker(hat): the inclusion is injective",
        incl.kernel().order() == 1,
        Vec::new(),
    ));
    verdicts.push(exactness_verdict(
        2,
        "exactness at Ker(D): ker(hat restricted) = Ker(D)&Ker(hat)",
        &incl,
        &hat_slash,
        describe_aut,
    )?);

    // exactness at Aut_Rrings: im(hat_/) = ker(E)
    let neutral = neutral_coupling(ext)?;
    let mut ker_e = Vec::new();
    let mut ring_to_class: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    let mut e_mult_ok = true;
    let mut e_witnesses = Vec::new();
    for (key, gamma) in t.rings.group.keys().iter().zip(&t.rings.mats) {
        let c = twist_coupling(ext, gamma)?;
        let class_key = classes.identify(ext, &c)?.ok_or_else(|| {
            Error::CoherenceFailure("twist class missing from generated subgroup".into())
        })?;
        ring_to_class.push((key.clone(), class_key));
        if class_witness(ext, &c, &neutral)?.is_some() {
            ker_e.push(key.clone());
        }
    }
    for (ka, ca) in &ring_to_class {
        for (kb, cb) in &ring_to_class {
            let prod_ring = t.rings.group.mul(ka, kb).expect("closure").to_vec();
            let expected = &ring_to_class
                .iter()
                .find(|(k, _)| k == &prod_ring)
                .expect("ring closure")
                .1;
            let got = classes.group.mul(ca, cb).expect("class closure");
            if got != expected.as_slice() {
                e_mult_ok = false;
                e_witnesses.push(format!(
                    "E(gamma gamma') differs from E(gamma) E(gamma') for {} and {}",
                    describe_ring(ka),
                    describe_ring(kb)
                ));
            }
        }
    }
    ker_e.sort();
    let mut image_keys = hat_slash.image().keys().to_vec();
    image_keys.sort();
    let witnesses = set_diff_witnesses("im(hat_/)", &image_keys, "ker(E)", &ker_e, describe_ring);
    verdicts.push(Verdict::checked(
        3,
        "exactness at Aut_Rrings(S): im(hat restricted to Ker(D)) = ker(E)",
        witnesses.is_empty(),
        witnesses,
    ));

    // exactness at P(S/R): ker(O_l) = im(E) within the generated subgroup
    let mut im_e: Vec<Vec<u8>> = ring_to_class.iter().map(|(_, c)| c.clone()).collect();
    im_e.sort();
    im_e.dedup();
    let mut ker_ol: Vec<Vec<u8>> = Vec::new();
    let mut roundtrip_ok = true;
    let mut roundtrip_witnesses = Vec::new();
    for (rep, key) in classes.reps.iter().zip(&classes.rep_keys) {
        if let Some(f) = p_trivial_witness(ext, rep)? {
            ker_ol.push(key.clone());
            match coupling_to_ring_aut(ext, rep, &f) {
                Ok(gamma) => {
                    if !t.rings.group.contains(&gamma.key()) {
                        roundtrip_ok = false;
                        roundtrip_witnesses.push(format!(
                            "reduced automorphism {} not in Aut_Rrings(S)",
                            gamma.render()
                        ));
                    } else {
                        let back = twist_coupling(ext, &gamma)?;
                        if classes.identify(ext, &back)?.as_deref() != Some(key.as_slice()) {
                            roundtrip_ok = false;
                            roundtrip_witnesses.push(
                                "twist of the reduced automorphism lands in a different class"
                                    .to_string(),
                            );
                        }
                    }
                }
                Err(e) => {
                    roundtrip_ok = false;
                    roundtrip_witnesses.push(format!("reduction failed: {e}"));
                }
            }
        }
    }
    ker_ol.sort();
    let describe_class = |k: &[u8]| {
        classes
            .rep_by_key(k)
            .map_or_else(|| format!("{k:?}"), |rep| rep.render())
    };
    let witnesses = set_diff_witnesses("ker(O_l)", &ker_ol, "im(E)", &im_e, describe_class);
    verdicts.push(Verdict::checked(
        4,
        "exactness at P(S/R): ker(O_l) = im(E) on the generated subgroup",
        witnesses.is_empty(),
        witnesses,
    ));
    verdicts.push(Verdict::checked(
        5,
        "every O_l-trivial class reduces to a ring automorphism twisting back to it",
        roundtrip_ok,
        roundtrip_witnesses,
    ));
    verdicts.push(Verdict::checked(
        6,
        "E is multiplicative at class level on all pairs",
        e_mult_ok,
        e_witnesses,
    ));
    Ok(SequenceReport::finish(4, nodes, verdicts, vec![SCOPE_NOTE.into()]))
}

/// Run all four sequences over one shared table set. The four verifications
/// are independent and run through the execution strategy layer; the report
/// order is fixed regardless.
pub fn verify_all(ext: &Extension) -> Result<Vec<SequenceReport>> {
    let t = Tables::new(ext)?;
    let runs = crate::exec::map_collect(&[1u8, 2, 3, 4], |&n| match n {
        1 => seq1_with(ext, &t),
        2 => seq2_with(ext, &t),
        3 => seq3_with(ext, &t),
        _ => seq4_with(ext, &t),
    });
    runs.into_iter().collect()
}

pub fn seq(ext: &Extension, n: u8) -> Result<SequenceReport> {
    match n {
        1 => seq1(ext),
        2 => seq2(ext),
        3 => seq3(ext),
        4 => seq4(ext),
        _ => Err(Error::Parse(format!("no sequence numbered {n}"))),
    }
}

// ---------------------------------------------------------------------------
// The closing diagram
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DiagramNode {
    pub name: String,
    pub order: Option<usize>,
    pub annotation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramEdge {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagram {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
}

impl Diagram {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sequences {\n  rankdir=LR;\n");
        for n in &self.nodes {
            let mut label = n.name.clone();
            if let Some(order) = n.order {
                label.push_str(&format!("\\n|.| = {order}"));
            }
            if let Some(a) = &n.annotation {
                label.push_str(&format!("\\n{a}"));
            }
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", n.name, label));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                e.from, e.to, e.label
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from("nodes:\n");
        for n in &self.nodes {
            let order = n
                .order
                .map_or_else(|| "unbounded".to_string(), |o| o.to_string());
            out.push_str(&format!("  {} (order {order})", n.name));
            if let Some(a) = &n.annotation {
                out.push_str(&format!(" [{a}]"));
            }
            out.push('\n');
        }
        out.push_str("edges:\n");
        for e in &self.edges {
            out.push_str(&format!("  {} --{}--> {}\n", e.from, e.label, e.to));
        }
        out
    }
}

/// The ten groups and twelve homomorphisms of the combined picture, with
/// computed orders where the group is enumerable.
pub fn diagram(ext: &Extension) -> Result<Diagram> {
    let t = Tables::new(ext)?;
    let inter = intersection_group(&t)?;
    let class_annotation = match &t.classes {
        Ok(c) => format!("reachable classes: {}", c.order()),
        Err(e) => format!("class generation failed: {e}"),
    };
    let nodes = vec![
        DiagramNode { name: "1".into(), order: Some(1), annotation: None },
        DiagramNode {
            name: "Ker(D)&Ker(hat)".into(),
            order: Some(inter.order()),
            annotation: None,
        },
        DiagramNode { name: "Ker(D)".into(), order: Some(t.ker_d.kernel.order()), annotation: None },
        DiagramNode {
            name: "Ker(hat)".into(),
            order: Some(t.ker_hat.kernel.order()),
            annotation: None,
        },
        DiagramNode { name: "Aut_SR(S)".into(), order: Some(t.aut.order()), annotation: None },
        DiagramNode { name: "Aut_Rrings(S)".into(), order: Some(t.rings.order()), annotation: None },
        DiagramNode { name: "Inv(R<=S)".into(), order: Some(t.inv.order()), annotation: None },
        DiagramNode { name: "P(S/R)".into(), order: None, annotation: Some(class_annotation) },
        DiagramNode { name: "Pic(R)".into(), order: None, annotation: None },
        DiagramNode { name: "Pic(S)".into(), order: None, annotation: None },
    ];
    let edge = |from: &str, to: &str, label: &str| DiagramEdge {
        from: from.into(),
        to: to.into(),
        label: label.into(),
    };
    let edges = vec![
        edge("Ker(D)&Ker(hat)", "Ker(D)", "incl"),
        edge("Ker(D)&Ker(hat)", "Ker(hat)", "incl"),
        edge("Ker(D)", "Aut_SR(S)", "incl"),
        edge("Ker(hat)", "Aut_SR(S)", "incl"),
        edge("Aut_SR(S)", "Inv(R<=S)", "D"),
        edge("Aut_SR(S)", "Aut_Rrings(S)", "hat"),
        edge("Inv(R<=S)", "Pic(R)", "[-]"),
        edge("Aut_Rrings(S)", "Pic(S)", "[S_-]"),
        edge("Inv(R<=S)", "P(S/R)", "D'"),
        edge("Aut_Rrings(S)", "P(S/R)", "E"),
        edge("P(S/R)", "Pic(S)", "O_r"),
        edge("P(S/R)", "Pic(R)", "O_l"),
    ];
    Ok(Diagram { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn all_four_sequences_pass_on_fix_a() {
        let ext = samples::fix_a().unwrap();
        for report in verify_all(&ext).unwrap() {
            assert!(report.pass, "{}", report.render_text());
        }
    }

    #[test]
    fn all_four_sequences_pass_on_fix_c() {
        let ext = samples::fix_c().unwrap();
        for report in verify_all(&ext).unwrap() {
            assert!(report.pass, "{}", report.render_text());
        }
    }

    #[test]
    fn seq1_reports_expected_orders_on_fix_b() {
        let ext = samples::fix_b().unwrap();
        let report = seq1(&ext).unwrap();
        assert!(report.pass, "{}", report.render_text());
        let orders: Vec<Option<usize>> = report.nodes.iter().map(|n| n.order).collect();
        assert_eq!(orders, vec![Some(1), Some(4), Some(4), Some(2), None]);
    }

    #[test]
    fn reports_are_deterministic() {
        let ext = samples::fix_a().unwrap();
        let a = serde_json::to_string(&verify_all(&ext).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_all(&ext).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diagram_shape_is_constant() {
        for (_, ext) in samples::all_fixtures() {
            let d = diagram(&ext).unwrap();
            assert_eq!(d.nodes.len(), 10);
            assert_eq!(d.edges.len(), 12);
        }
    }

    #[test]
    fn diagram_of_fix_a_annotates_orders() {
        let ext = samples::fix_a().unwrap();
        let d = diagram(&ext).unwrap();
        let inv = d.nodes.iter().find(|n| n.name == "Inv(R<=S)").unwrap();
        assert_eq!(inv.order, Some(2));
        let aut = d.nodes.iter().find(|n| n.name == "Aut_SR(S)").unwrap();
        assert_eq!(aut.order, Some(1));
        assert!(d.to_dot().contains("digraph"));
    }
}
