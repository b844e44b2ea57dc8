use std::collections::BTreeSet;

use num::{BigInt, ToPrimitive};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgo_core::bounds::{
    bound_coefficient, certified_extrema, random_polynomial, rho_from_enclosures, witness_sweep,
    BoundKind, EnclosureParams,
};
use sgo_core::grid::{
    grid_maximize, grid_maximize_with, grid_minimize, grid_minimize_with, GridOptions, GridSpec,
    DEFAULT_GRID_LIMIT,
};
use sgo_core::hypergeom::{bernstein_approximation, expectation};
use sgo_core::identities::{
    run_sweeps, verify_identity, Identity, IdentityCheck, IdentityName, Relation, SweepConfig,
};
use sgo_core::poly::DEFAULT_ELEVATION_CAP;
use sgo_core::rational::parse_rational;
use sgo_core::stableset::alpha_lower_bound_with;
use sgo_core::{Enclosure, HomogeneousPolynomial, HypergeomParams, Rational};

use crate::args::{
    BoundsArgs, ConvergeArgs, EncloseArgs, ExpectArgs, GridArgs, StableSetArgs, VerifyArgs,
};
use crate::error::{config, CliError};
use crate::input::{read_graph, read_polynomial};
use crate::output::{Cell, Table};

pub const MAX_GRID_ENV: &str = "SGO_MAX_GRID";

/// Grid-size ceiling: `None` with `--force`, else `SGO_MAX_GRID` or 10⁸.
pub fn grid_limit(force: bool) -> Result<Option<u128>, CliError> {
    if force {
        return Ok(None);
    }
    match std::env::var(MAX_GRID_ENV) {
        Ok(v) => v.trim().parse::<u128>().map(Some).map_err(|_| {
            config(format!(
                "{MAX_GRID_ENV} must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(Some(DEFAULT_GRID_LIMIT)),
    }
}

fn guard(n: usize, r: u32, limit: Option<u128>) -> Result<(), CliError> {
    let spec = GridSpec::new(n, r)?;
    if let Some(limit) = limit {
        spec.check_size(limit)?;
    }
    Ok(())
}

fn check_elevation(k: u32, force: bool) -> Result<(), CliError> {
    if k > DEFAULT_ELEVATION_CAP && !force {
        return Err(config(format!(
            "elevation {k} exceeds the cap of {DEFAULT_ELEVATION_CAP} (use --force)"
        )));
    }
    Ok(())
}

fn poly_meta(t: &mut Table, f: &HomogeneousPolynomial) {
    t.meta("n", Cell::int(f.n() as i128));
    t.meta("degree", Cell::int(f.degree()));
    t.meta("polynomial", Cell::Text(f.to_string()));
}

fn big_cell(v: &BigInt) -> Cell {
    v.to_i128()
        .map_or_else(|| Cell::Text(v.to_string()), Cell::Int)
}

pub fn grid(args: &GridArgs, maximize: bool, force: bool) -> Result<Table, CliError> {
    let f = read_polynomial(&args.poly.poly, args.poly.homogenize)?;
    let limit = grid_limit(force)?;
    let (command, label) = if maximize {
        ("grid-max", "maximizers")
    } else {
        ("grid-min", "minimizers")
    };
    let mut t = Table::new(
        command,
        &[
            "r",
            "value",
            "value_decimal",
            "tie_count",
            "evaluations",
            label,
        ],
    );
    poly_meta(&mut t, &f);
    let opts = GridOptions {
        tie_cap: args.tie_cap,
        parallel: true,
    };
    for &r in &args.r.0 {
        guard(f.n(), r, limit)?;
        let res = if maximize {
            grid_maximize_with(&f, r, opts)
        } else {
            grid_minimize_with(&f, r, opts)
        };
        let points = res
            .points()
            .iter()
            .map(|p| p.iter().map(|q| q.to_string()).collect())
            .collect();
        t.push(vec![
            Cell::int(r),
            Cell::rational(&res.value),
            Cell::decimal(&res.value),
            Cell::int(res.tie_count),
            Cell::int(res.evaluations),
            Cell::Points(points),
        ]);
    }
    Ok(t)
}

pub fn expect(args: &ExpectArgs) -> Result<Table, CliError> {
    let f = read_polynomial(&args.poly.poly, args.poly.homogenize)?;
    let total: u64 = args.counts.iter().sum();
    let m = args.m.unwrap_or(total);
    if m != total {
        return Err(config(format!("counts sum to {total}, but --m is {m}")));
    }
    if m == 0 {
        return Err(config("counts must not all be zero"));
    }
    if args.counts.len() != f.n() {
        return Err(config(format!(
            "{} counts given for a polynomial in {} variables",
            args.counts.len(),
            f.n()
        )));
    }
    let center: Vec<Rational> = args
        .counts
        .iter()
        .map(|&c| Rational::new(c.into(), m.into()))
        .collect();
    let f_center = f.evaluate(&center)?;
    let mode = if args.bernstein {
        "multinomial"
    } else {
        "hypergeometric"
    };
    let mut t = Table::new(
        "expect",
        &[
            "r",
            "mode",
            "expectation",
            "expectation_decimal",
            "f_center",
            "f_center_decimal",
        ],
    );
    poly_meta(&mut t, &f);
    t.meta("m", Cell::int(m));
    t.meta(
        "counts",
        Cell::Text(
            args.counts
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
    );
    for &r in &args.r.0 {
        let e = if args.bernstein {
            guard(f.n(), r, grid_limit(false)?)?;
            bernstein_approximation(&f, &center, r)?
        } else {
            let p = HypergeomParams::with_total(m, args.counts.clone(), r.into())?;
            expectation(&f, &p)?
        };
        t.push(vec![
            Cell::int(r),
            Cell::Text(mode.into()),
            Cell::rational(&e),
            Cell::decimal(&e),
            Cell::rational(&f_center),
            Cell::decimal(&f_center),
        ]);
    }
    Ok(t)
}

fn parse_kinds(only: &[String]) -> Result<Vec<BoundKind>, CliError> {
    if only.is_empty() {
        return Ok(BoundKind::ALL.to_vec());
    }
    only.iter()
        .map(|s| {
            BoundKind::from_tag(s.trim()).ok_or_else(|| config(format!("unknown bound kind {s:?}")))
        })
        .collect()
}

pub fn bounds(args: &BoundsArgs) -> Result<Table, CliError> {
    if args.d == 0 {
        return Err(config("--d must be >= 1"));
    }
    let kinds = parse_kinds(&args.only)?;
    let ms: Vec<Option<u64>> = match &args.m {
        Some(list) => list.0.iter().map(|&m| Some(u64::from(m))).collect(),
        None => vec![None],
    };
    let mut t = Table::new(
        "bounds",
        &[
            "kind",
            "d",
            "r",
            "m",
            "k",
            "coefficient",
            "coefficient_decimal",
            "applicable",
            "reason",
        ],
    );
    for &r in &args.r.0 {
        for &m in &ms {
            for &kind in &kinds {
                let rep = bound_coefficient(kind, args.d, r.into(), m);
                if !args.all && !rep.applicable() {
                    continue;
                }
                t.push(vec![
                    Cell::Text(kind.tag().into()),
                    Cell::int(rep.d),
                    Cell::int(rep.r),
                    rep.m.map_or(Cell::Empty, Cell::int),
                    rep.k.map_or(Cell::Empty, Cell::int),
                    Cell::opt_rational(rep.coefficient.as_ref()),
                    rep.coefficient.as_ref().map_or(Cell::Empty, Cell::decimal),
                    Cell::Bool(rep.applicable()),
                    Cell::Text(rep.reason.clone()),
                ]);
            }
        }
    }
    Ok(t)
}

fn parse_known(s: &Option<String>) -> Result<Option<Rational>, CliError> {
    s.as_deref()
        .map(parse_rational)
        .transpose()
        .map_err(CliError::from)
}

fn enclosure_meta(t: &mut Table, name: &str, e: &Enclosure) {
    t.meta(&format!("{name}_lo"), Cell::rational(&e.lo));
    t.meta(&format!("{name}_hi"), Cell::rational(&e.hi));
}

pub fn converge(args: &ConvergeArgs, force: bool) -> Result<Table, CliError> {
    let f = read_polynomial(&args.poly.poly, args.poly.homogenize)?;
    check_elevation(args.elevation, force)?;
    let limit = grid_limit(force)?;
    let mut grids: BTreeSet<u32> = args.r.0.iter().copied().collect();
    grids.extend(args.m);
    for &g in &grids {
        guard(f.n(), g, limit)?;
    }
    let params = EnclosureParams {
        elevation: args.elevation,
        grids: Vec::new(),
        known_min: parse_known(&args.known_min)?,
        known_max: parse_known(&args.known_max)?,
    };
    let grids: Vec<u32> = grids.into_iter().collect();
    let (fmin, fmax) = certified_extrema(&f, &grids, &params)?;
    let square_free = f.is_square_free();

    let mut columns = vec![
        "r".to_string(),
        "grid_value".into(),
        "grid_value_decimal".into(),
        "rho_lo".into(),
        "rho_hi".into(),
        "rho_hi_decimal".into(),
        "rho_hi_r2".into(),
    ];
    columns.extend(BoundKind::ALL.iter().map(|k| k.tag().to_string()));
    let mut t = Table::new("converge", &[]);
    t.columns = columns;
    poly_meta(&mut t, &f);
    t.meta("m", args.m.map_or(Cell::Empty, Cell::int));
    t.meta("elevation", Cell::int(args.elevation));
    enclosure_meta(&mut t, "fmin", &fmin);
    enclosure_meta(&mut t, "fmax", &fmax);

    for &r in &args.r.0 {
        let g = grid_minimize(&f, r).value;
        let rho = match rho_from_enclosures(&g, &fmin, &fmax) {
            Ok(v) => Some(v),
            Err(sgo_core::Error::DegenerateRange) => None,
            Err(e) => return Err(e.into()),
        };
        let mut row = vec![Cell::int(r), Cell::rational(&g), Cell::decimal(&g)];
        match &rho {
            Some((lo, hi)) => {
                let r2 = hi * Rational::from_integer((u64::from(r) * u64::from(r)).into());
                row.extend([
                    Cell::rational(lo),
                    Cell::rational(hi),
                    Cell::decimal(hi),
                    Cell::rational(&r2),
                ]);
            }
            None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        for kind in BoundKind::ALL {
            let rep = bound_coefficient(kind, f.degree(), r.into(), args.m.map(u64::from));
            let usable = !(kind.requires_square_free() && !square_free);
            row.push(if usable {
                Cell::opt_rational(rep.coefficient.as_ref())
            } else {
                Cell::Empty
            });
        }
        t.push(row);
    }
    Ok(t)
}

fn sweep_config(args: &VerifyArgs, only: Vec<IdentityName>) -> SweepConfig {
    let mut cfg = SweepConfig {
        only,
        ..Default::default()
    };
    if let Some(d) = args.max_d {
        cfg.stirling_sum_max_d = d;
        cfg.stirling_multi_max_d = d;
        cfg.random_max_d = d;
        cfg.a_beta_max_d = d;
        cfg.sigma_max_d = d;
    }
    if let Some(r) = args.max_r {
        cfg.stirling_sum_max_r = r;
    }
    if let Some(m) = args.max_m {
        cfg.a_beta_max_m = m;
        cfg.sigma_max_m = m;
        cfg.phi_max_m = m;
    }
    if let Some(k) = args.max_k {
        cfg.sigma_max_k = k;
        cfg.phi_max_k = k;
    }
    if let Some(v) = args.kmr_max {
        cfg.kmr_max = v;
    }
    if let Some(p) = args.points {
        cfg.random_points = p;
    }
    cfg.seed = args.seed;
    cfg
}

const BOUNDS_TAG: &str = "BOUNDS";

pub struct VerifyOutcome {
    pub table: Table,
    pub checks: usize,
    pub failures: usize,
}

pub fn verify(args: &VerifyArgs, force: bool) -> Result<VerifyOutcome, CliError> {
    check_elevation(args.elevation, force)?;
    let mut names = Vec::new();
    let mut witnesses = args.only.is_empty();
    for tag in &args.only {
        let tag = tag.trim();
        if tag.eq_ignore_ascii_case(BOUNDS_TAG) {
            witnesses = true;
        } else {
            names.push(
                IdentityName::from_tag(tag)
                    .ok_or_else(|| config(format!("unknown check {tag:?}")))?,
            );
        }
    }
    let mut checks: Vec<IdentityCheck> = if args.only.is_empty() || !names.is_empty() {
        run_sweeps(&sweep_config(args, names))?
    } else {
        Vec::new()
    };
    if args.inject_fault {
        let mut bad = verify_identity(&Identity::StirlingSum { d: 3, r: 4 })?;
        bad.rhs += Rational::from_integer(1.into());
        bad.params.push_str(";fault=injected");
        bad.holds = bad.relation.test(&bad.lhs, &bad.rhs);
        checks.push(bad);
    }

    let mut t = Table::new(
        "verify",
        &["check", "params", "lhs", "relation", "rhs", "holds"],
    );
    let mut total = 0;
    let mut failures = 0;
    for c in &checks {
        total += 1;
        if !c.holds {
            failures += 1;
        }
        if !args.failures_only || !c.holds {
            t.push(vec![
                Cell::Text(c.name.tag().into()),
                Cell::Text(c.params.clone()),
                Cell::rational(&c.lhs),
                Cell::Text(c.relation.symbol().into()),
                Cell::rational(&c.rhs),
                Cell::Bool(c.holds),
            ]);
        }
    }

    if witnesses && args.polys > 0 {
        let max_m = args.max_m.unwrap_or(8);
        let max_m = u32::try_from(max_m).map_err(|_| config("--max-m too large"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let polys: Vec<HomogeneousPolynomial> = (0..args.polys)
            .map(|_| random_polynomial(&mut rng, args.poly_max_n, args.poly_max_d, args.coef))
            .collect();
        let per_poly = BoundKind::ALL.len() * (max_m as usize) * (max_m as usize + 1) / 2;
        for (i, w) in witness_sweep(&polys, max_m, args.elevation)?
            .iter()
            .enumerate()
        {
            let Some(rhs) = &w.rhs else { continue };
            let f = &polys[i / per_poly];
            total += 1;
            let holds = w.holds();
            if !holds {
                failures += 1;
            }
            if !args.failures_only || !holds {
                t.push(vec![
                    Cell::Text(format!("BOUND:{}", w.kind.tag())),
                    Cell::Text(format!(
                        "poly={};n={};d={};r={};m={}",
                        i / per_poly,
                        f.n(),
                        f.degree(),
                        w.r,
                        w.m
                    )),
                    Cell::rational(&w.lhs),
                    Cell::Text(Relation::Le.symbol().into()),
                    Cell::rational(rhs),
                    Cell::Bool(holds),
                ]);
            }
        }
    }
    if total == 0 {
        return Err(config("no checks run: the selected sweep ranges are empty"));
    }
    t.meta("checks", Cell::int(total as i128));
    t.meta("failures", Cell::int(failures as i128));
    Ok(VerifyOutcome {
        table: t,
        checks: total,
        failures,
    })
}

pub fn stable_set(args: &StableSetArgs, force: bool) -> Result<Table, CliError> {
    let g = read_graph(&args.graph)?;
    let limit = grid_limit(force)?.unwrap_or(u128::MAX);
    let mut t = Table::new(
        "stable-set",
        &[
            "r",
            "grid_value",
            "grid_value_decimal",
            "alpha_lb",
            "evaluations",
        ],
    );
    t.flatten_single = true;
    t.meta("vertices", Cell::int(g.vertex_count() as i128));
    t.meta("edges", Cell::int(g.edge_count() as i128));
    for &r in &args.r.0 {
        let b = alpha_lower_bound_with(&g, r, limit, GridOptions::default())?;
        t.push(vec![
            Cell::int(r),
            Cell::rational(&b.grid_value),
            Cell::decimal(&b.grid_value),
            big_cell(&b.alpha_lb),
            Cell::int(b.evaluations),
        ]);
    }
    Ok(t)
}

pub fn enclose(args: &EncloseArgs, force: bool) -> Result<Table, CliError> {
    let f = read_polynomial(&args.poly.poly, args.poly.homogenize)?;
    check_elevation(args.elevation, force)?;
    let limit = grid_limit(force)?;
    let mut grid_lo: Option<Rational> = None;
    let mut grid_hi: Option<Rational> = None;
    if let Some(list) = &args.r {
        for &r in &list.0 {
            guard(f.n(), r, limit)?;
            let lo = grid_minimize(&f, r).value;
            let hi = grid_maximize(&f, r).value;
            grid_lo = Some(grid_lo.map_or(lo.clone(), |v| v.min(lo)));
            grid_hi = Some(grid_hi.map_or(hi.clone(), |v| v.max(hi)));
        }
    }
    let mut t = Table::new(
        "enclose",
        &[
            "elevation",
            "min_coeff",
            "max_coeff",
            "fmin_lo",
            "fmin_hi",
            "fmax_lo",
            "fmax_hi",
            "fmin_lo_decimal",
            "fmax_hi_decimal",
        ],
    );
    poly_meta(&mut t, &f);
    for k in 0..=args.elevation {
        let table = f.elevate(k).bernstein_table();
        let (mut fmin, mut fmax) = f.bernstein_enclosure(k);
        if let Some(v) = &grid_lo {
            fmin = Enclosure::new(fmin.lo.clone(), (&fmin.hi).min(v).clone());
        }
        if let Some(v) = &grid_hi {
            fmax = Enclosure::new((&fmax.lo).max(v).clone(), fmax.hi.clone());
        }
        t.push(vec![
            Cell::int(k),
            Cell::rational(&table.min_coeff),
            Cell::rational(&table.max_coeff),
            Cell::rational(&fmin.lo),
            Cell::rational(&fmin.hi),
            Cell::rational(&fmax.lo),
            Cell::rational(&fmax.hi),
            Cell::decimal(&fmin.lo),
            Cell::decimal(&fmax.hi),
        ]);
    }
    Ok(t)
}
