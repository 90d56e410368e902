use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use tofsynth::approx::{approx_tof_decide, approx_tof_opt, BAND_SLACK};
use tofsynth::bounds::{
    gen_set_bound_cs, gen_set_bound_tof, lower_bound_approx, lower_bound_exact,
    rotation_expansion, RotationKind,
};
use tofsynth::channel::{chan_rep_unitary_exact, random_chan_rep, CliffordFactor};
use tofsynth::clifford::{circuit_to_unitary, global_phase_distance};
use tofsynth::dense::Matrix;
use tofsynth::exact::{exact_tof_decide, nested_mitm, HeuristicOutcome, MitmOutcome};
use tofsynth::genset::gen_element_circuit;
use tofsynth::{ChannelMatrix, Circuit, Decomposition, GenTriple, Generators};

use crate::config::Config;
use crate::io::{self, Instance, InstanceFile, Target};
use crate::{
    cache, BoundArgs, CliError, DecideArgs, Engine, Factor, GenSetArgs, RandomArgs, SearchArgs,
    SynthArgs, VerifyArgs,
};

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => io::write_text(p, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn gen_set(cfg: &Config, cache_dir: &Path, a: GenSetArgs) -> Result<(), CliError> {
    let mode = cfg.mode(a.mode);
    let (set, path) = cache::gen_set(cache_dir, a.n, mode)?;
    log::info!("cache file {}", path.display());
    if let Some(out) = &a.out {
        io::write_text(out, &to_json(&set))?;
    }
    if a.count_only {
        println!("{}", set.len());
    } else {
        println!("{}", to_json(&set));
    }
    Ok(())
}

fn generators(
    cfg: &Config,
    cache_dir: &Path,
    s: &SearchArgs,
    n: usize,
) -> Result<Generators, CliError> {
    let (set, _) = cache::gen_set(cache_dir, n, cfg.mode(s.mode))?;
    Ok(Generators::new(set))
}

/// Exact channel of the target; unitaries must have dyadic channels.
fn exact_channel(t: &Target) -> Result<ChannelMatrix, CliError> {
    match t {
        Target::Channel(c) => Ok(c.clone()),
        Target::Unitary(u) => chan_rep_unitary_exact(u).map_err(CliError::from),
    }
}

fn unitary_only(t: &Target) -> Result<&Matrix, CliError> {
    match t {
        Target::Unitary(u) => Ok(u),
        Target::Channel(_) => Err(CliError::Usage(
            "the approx engine needs a unitary input".into(),
        )),
    }
}

#[derive(Serialize)]
struct Verification {
    verified: bool,
    /// The word times the trailing Clifford equals the target channel.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_channel: Option<bool>,
    /// The emitted circuit's channel equals the target channel.
    #[serde(skip_serializing_if = "Option::is_none")]
    circuit_channel: Option<bool>,
    /// Global-phase-invariant distance of the circuit to a unitary target.
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<f64>,
}

fn verify_exact(
    target: &Target,
    channel: &ChannelMatrix,
    d: &Decomposition,
) -> Result<(Verification, Circuit), CliError> {
    let exact = d.verify(channel);
    let circuit = d.circuit().map_err(|e| {
        CliError::Fail(format!(
            "the target is not the channel of a Clifford+Toffoli unitary: {e}"
        ))
    })?;
    let u = circuit_to_unitary(&circuit)?;
    let circuit_channel = chan_rep_unitary_exact(&u).ok().as_ref() == Some(channel);
    let distance = match target {
        Target::Unitary(t) => Some(global_phase_distance(t, &u)?),
        Target::Channel(_) => None,
    };
    let verified = exact && circuit_channel && distance.is_none_or(|x| x < 1e-9);
    Ok((
        Verification {
            verified,
            exact_channel: Some(exact),
            circuit_channel: Some(circuit_channel),
            distance,
        },
        circuit,
    ))
}

/// Signed permutation as `[row, sign]` per column.
fn trailing_columns(m: &ChannelMatrix) -> Value {
    let cols: Vec<Value> = (0..m.dim())
        .map(|c| match m.signed_column(c) {
            Some((r, s)) => json!([r, s]),
            None => Value::Null,
        })
        .collect();
    Value::Array(cols)
}

fn word_strings(word: &[GenTriple]) -> Value {
    serde_json::to_value(word).expect("serializable")
}

fn heuristic_search(
    u: &ChannelMatrix,
    max_count: usize,
    rule: tofsynth::Rule,
    gens: &Generators,
) -> Result<Option<Decomposition>, CliError> {
    for m in u.sde() as usize..=max_count {
        let report = exact_tof_decide(u, m, rule, gens)?;
        log::info!("m = {m}: frontier per level {:?}", report.frontier);
        if let HeuristicOutcome::Found(d) = report.outcome {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

pub fn synth(cfg: &Config, cache_dir: &Path, a: SynthArgs) -> Result<(), CliError> {
    let s = &a.search;
    let target = io::read_target(&s.input, s.index)?;
    let n = target.num_qubits();
    let engine = s.engine;
    let (report, circuit) = match engine {
        Engine::Heuristic | Engine::Mitm => {
            let channel = exact_channel(&target)?;
            let gens = generators(cfg, cache_dir, s, n)?;
            let max_count = cfg.max_count(a.max_count, 4);
            let found = if engine == Engine::Heuristic {
                heuristic_search(&channel, max_count, cfg.rule(s.rule)?, &gens)?
            } else {
                let c = cfg.nesting(s.nesting)?;
                match nested_mitm(&channel, max_count, c, &gens, cfg.max_entries(s.max_entries))? {
                    MitmOutcome::Found(d) => Some(d),
                    MitmOutcome::ExceedsBound => None,
                }
            };
            let Some(d) = found else {
                return Err(CliError::Fail(format!(
                    "no decomposition with at most {max_count} generators found"
                )));
            };
            let (v, circuit) = verify_exact(&target, &channel, &d)?;
            let report = json!({
                "engine": engine_name(engine),
                "n": n,
                "count": d.count(),
                "word": word_strings(&d.word),
                "trailing": trailing_columns(&d.trailing),
                "circuit": circuit.to_string(),
                "verification": v,
            });
            (report, circuit)
        }
        Engine::Approx => {
            let w = unitary_only(&target)?;
            let eps = cfg.eps(s.eps, 1e-6)?;
            let gens = generators(cfg, cache_dir, s, n)?;
            let res = approx_tof_opt(w, eps, &gens, cfg.max_count(a.max_count, 2))?;
            let mut circuit = res.trailing.circuit.clone();
            for t in res.word.iter().rev() {
                circuit.extend(&gen_element_circuit(t));
            }
            let distance = global_phase_distance(w, &circuit_to_unitary(&circuit)?)?;
            let v = Verification {
                verified: distance <= eps + BAND_SLACK,
                exact_channel: None,
                circuit_channel: None,
                distance: Some(distance),
            };
            let report = json!({
                "engine": engine_name(engine),
                "n": n,
                "epsilon": eps,
                "count": res.count,
                "word": word_strings(&res.word),
                "circuit": circuit.to_string(),
                "verification": v,
            });
            (report, circuit)
        }
    };
    let verified = report["verification"]["verified"].as_bool() == Some(true);
    if let Some(path) = &a.emit_circuit {
        io::write_text(path, &circuit.to_string())?;
    }
    emit(a.out.as_deref(), &to_json(&report))?;
    if !verified {
        return Err(CliError::Fail("verification failed".into()));
    }
    Ok(())
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Heuristic => "heuristic",
        Engine::Mitm => "mitm",
        Engine::Approx => "approx",
    }
}

pub fn decide(cfg: &Config, cache_dir: &Path, a: DecideArgs) -> Result<(), CliError> {
    let s = &a.search;
    let target = io::read_target(&s.input, s.index)?;
    let n = target.num_qubits();
    let gens = generators(cfg, cache_dir, s, n)?;
    let (yes, count, word) = match s.engine {
        Engine::Heuristic => {
            let u = exact_channel(&target)?;
            let report = exact_tof_decide(&u, a.m, cfg.rule(s.rule)?, &gens)?;
            log::info!("frontier per level {:?}", report.frontier);
            match report.outcome {
                HeuristicOutcome::Found(d) => (true, Some(d.count()), d.word),
                _ => (false, None, Vec::new()),
            }
        }
        Engine::Mitm => {
            let u = exact_channel(&target)?;
            let c = cfg.nesting(s.nesting)?;
            match nested_mitm(&u, a.m, c, &gens, cfg.max_entries(s.max_entries))? {
                MitmOutcome::Found(d) => (true, Some(d.count()), d.word),
                MitmOutcome::ExceedsBound => (false, None, Vec::new()),
            }
        }
        Engine::Approx => {
            let w = unitary_only(&target)?;
            let eps = cfg.eps(s.eps, 1e-6)?;
            match approx_tof_decide(w, a.m, eps, &gens)? {
                Some(found) => (true, Some(found.word.len()), found.word),
                None => (false, None, Vec::new()),
            }
        }
    };
    let report = json!({
        "engine": engine_name(s.engine),
        "m": a.m,
        "decision": if yes { "YES" } else { "NO" },
        "count": count,
        "word": word_strings(&word),
    });
    println!("{}", to_json(&report));
    if yes {
        Ok(())
    } else {
        Err(CliError::Fail(format!("no decomposition with m = {}", a.m)))
    }
}

pub fn random(cfg: &Config, cache_dir: &Path, a: RandomArgs) -> Result<(), CliError> {
    if a.max_tof == 0 {
        return Err(CliError::Usage("--max-tof must be positive".into()));
    }
    let (set, _) = cache::gen_set(cache_dir, a.n, cfg.mode(a.mode))?;
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    let factor = match a.factor {
        Factor::Circuit => CliffordFactor::Circuit,
        Factor::SignedPermutation => CliffordFactor::SignedPermutation,
    };
    let mut instances = Vec::with_capacity(a.count);
    for i in 0..a.count {
        let tof_in = a.tof.unwrap_or(1 + i % a.max_tof);
        let inst_seed = seed.wrapping_add(i as u64);
        let r = random_chan_rep(&set, tof_in, inst_seed, factor)?;
        instances.push(Instance {
            seed: inst_seed,
            tof_in,
            word: r.word,
            channel: r.matrix,
            clifford: r.clifford.map(|c| c.to_string()),
        });
    }
    let file = InstanceFile {
        n: a.n,
        seed,
        instances,
    };
    emit(a.out.as_deref(), &to_json(&file))
}

pub fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let target = io::read_target(&a.target, a.index)?;
    let n = target.num_qubits();
    let circuit = io::read_circuit(&a.circuit, Some(n))?;
    let u = circuit_to_unitary(&circuit)?;
    let (pass, report) = match &target {
        Target::Unitary(t) => {
            let d = global_phase_distance(t, &u)?;
            (d <= a.eps, json!({ "pass": d <= a.eps, "distance": d }))
        }
        Target::Channel(c) => {
            let same = chan_rep_unitary_exact(&u).ok().as_ref() == Some(c);
            (same, json!({ "pass": same, "exact_channel": same }))
        }
    };
    println!("{}", to_json(&report));
    if pass {
        Ok(())
    } else {
        Err(CliError::Fail("circuit does not implement the target".into()))
    }
}

fn rational_text(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn bound(a: BoundArgs) -> Result<(), CliError> {
    let mut rows: Vec<(String, Value)> = Vec::new();
    let need_n = || a.n.ok_or_else(|| CliError::Usage("this bound needs -n".into()));
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| CliError::Usage(format!("this bound needs --{name}")))
    };
    if a.gen_set_size {
        rows.push(("gen-set-size".into(), rational_text(&gen_set_bound_tof(need_n()?)).into()));
    }
    if a.cs_gen_set_size {
        rows.push(("cs-gen-set-size".into(), rational_text(&gen_set_bound_cs(need_n()?)).into()));
    }
    if a.lower_exact || a.lower_approx {
        let alpha = need(a.alpha, "alpha")?;
        let support = a
            .support
            .ok_or_else(|| CliError::Usage("this bound needs --support".into()))?;
        if a.lower_exact {
            let b = lower_bound_exact(alpha, support, a.c)?;
            rows.push(("lower-exact".into(), b.into()));
        }
        if a.lower_approx {
            let b = lower_bound_approx(alpha, support, need(a.eps, "eps")?, a.c)?;
            rows.push(("lower-approx".into(), b.into()));
        }
    }
    if let Some(kind) = &a.rotation {
        let kind: RotationKind = kind.parse()?;
        let exp = rotation_expansion(kind);
        match a.theta {
            Some(theta) => {
                for (p, c) in exp.eval(theta) {
                    rows.push((format!("{kind} {p}"), json!([c.re, c.im])));
                }
            }
            None => {
                for (p, c) in &exp.terms {
                    rows.push((format!("{kind} {p}"), c.to_string().into()));
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage(
            "choose at least one of --gen-set-size, --cs-gen-set-size, --lower-exact, \
             --lower-approx, --rotation"
                .into(),
        ));
    }
    if a.json {
        let obj: serde_json::Map<String, Value> = rows.into_iter().collect();
        println!("{}", to_json(&obj));
    } else if rows.len() == 1 {
        println!("{}", plain(&rows[0].1));
    } else {
        for (k, v) in &rows {
            println!("{k}\t{}", plain(v));
        }
    }
    Ok(())
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
