//! The six subcommands. Each resolves its parameters, runs the library
//! routines, and renders one deterministic CSV or JSON document with the
//! resolved configuration echoed up front.

use crate::config::{Format, Settings};
use crate::output::{fmt_csv, fmt_json, finish, json_array, open_sink, write_all, Provenance};
use crate::{BetheArgs, DarkArgs, Failure, SpectrumArgs, SweepArgs, VerifyArgs, WavefunctionArgs};
use deltabox::bethe::{bosonic_level, fermionic_level};
use deltabox::dark::{dark_distribution, enumerate_dark_states, tower, verify_dark, DarkState};
use deltabox::eigen::lowest_eigenpairs;
use deltabox::matrix::assemble_hamiltonian;
use deltabox::model::{enumerate_basis, ModelParams, Sector};
use deltabox::strong::{exclusion_boundary, outside_spectrum};
use deltabox::validate;
use deltabox::wavefunction::{eval_wavefunction, region_weights};
use std::f64::consts::PI;

fn sign_text(value: i32) -> String {
    format!("{value:+}")
}

pub fn spectrum(args: &SpectrumArgs, cfg: &Settings) -> Result<(), Failure> {
    let sector = cfg.sector(&args.sigma, &args.pi)?;
    let g = cfg.f64_value(&args.g, "g", 1.0)?;
    let c = cfg.displacement(&args.c, 0.0)?;
    let nmax = cfg.nmax()?;
    let k = cfg.usize_value(&args.k, "k", 5)?;
    let tol = cfg.tol()?;
    let vectors = cfg.bool_value(args.vectors, "vectors")?;

    let basis = enumerate_basis(sector, nmax)?;
    let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
    let solution = lowest_eigenpairs(&h, k, tol)?;

    let mut prov = Provenance::new("spectrum");
    prov.text("sigma", sign_text(sector.sigma()))
        .text("pi", sign_text(sector.pi()))
        .float("g", g)
        .float("c", c)
        .int("nmax", i64::from(nmax))
        .int("k", k as i64)
        .float("tol", tol)
        .int("basis_size", basis.len() as i64);

    let mut sink = open_sink(cfg.out())?;
    match cfg.format()? {
        Format::Csv => {
            let mut text = prov.csv_header();
            text.push_str("index,energy,residual\n");
            for i in 0..k {
                text.push_str(&format!(
                    "{i},{},{}\n",
                    fmt_csv(solution.eigenvalues[i]),
                    fmt_csv(solution.residuals[i])
                ));
            }
            if vectors {
                text.push_str("# eigenvectors\n");
                let mut header = String::from("pair_index,n,m");
                for i in 0..k {
                    header.push_str(&format!(",v{i}"));
                }
                text.push_str(&header);
                text.push('\n');
                for (row, pair) in basis.pairs.iter().enumerate() {
                    text.push_str(&format!("{row},{},{}", pair.n, pair.m));
                    for vec in &solution.eigenvectors {
                        text.push(',');
                        text.push_str(&fmt_csv(vec[row]));
                    }
                    text.push('\n');
                }
            }
            write_all(sink.as_mut(), &text)?;
        }
        Format::Json => {
            let energies = json_array(solution.eigenvalues.iter().map(|&e| fmt_json(e)));
            let residuals = json_array(solution.residuals.iter().map(|&r| fmt_json(r)));
            let mut text = format!(
                "{{{},\"basis_size\":{},\"energies\":{energies},\"residuals\":{residuals}",
                prov.json_fields(),
                basis.len()
            );
            if vectors {
                let vectors = json_array(
                    solution
                        .eigenvectors
                        .iter()
                        .map(|vec| json_array(vec.iter().map(|&x| fmt_json(x)))),
                );
                text.push_str(&format!(",\"eigenvectors\":{vectors}"));
            }
            text.push_str("}\n");
            write_all(sink.as_mut(), &text)?;
        }
    }
    finish(sink)
}

/// Ground pair of each sector at coincident lines, in reporting order.
const BETHE_ROWS: [(i32, i32, u32, u32); 4] =
    [(1, 1, 1, 1), (1, -1, 2, 1), (-1, -1, 2, 1), (-1, 1, 3, 1)];

pub fn bethe(args: &BetheArgs, cfg: &Settings) -> Result<(), Failure> {
    let g_text = cfg.text_value(&args.g, "g", "1,20,100");
    let mut g_list = Vec::new();
    for part in g_text.split(',') {
        let g: f64 = part
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(format!("g list entry is not a number: {part}")))?;
        g_list.push(g);
    }
    let nmax = cfg.nmax()?;
    let tol = cfg.tol()?;
    let with_ed = cfg.bool_value(args.with_ed, "with-ed")?;

    let mut prov = Provenance::new("bethe");
    prov.text("g", g_text.clone());
    if with_ed {
        prov.int("nmax", i64::from(nmax)).float("tol", tol);
    }

    struct Row {
        sigma: i32,
        pi: i32,
        n: u32,
        m: u32,
        g: f64,
        energy: f64,
        ed: Option<(f64, f64)>,
    }

    let mut rows = Vec::new();
    for (sigma, pi, n, m) in BETHE_ROWS {
        let sector = Sector::from_signs(sigma, pi)?;
        for &g in &g_list {
            let energy = if sigma == 1 {
                bosonic_level(n, m, g)?.energy
            } else {
                fermionic_level(n, m)?
            };
            let ed = if with_ed {
                let basis = enumerate_basis(sector, nmax)?;
                let h = assemble_hamiltonian(&basis, ModelParams::new(g, 0.0)?);
                let ground = lowest_eigenpairs(&h, 1, tol)?.eigenvalues[0];
                Some((ground, ((ground - energy) / energy).abs()))
            } else {
                None
            };
            rows.push(Row {
                sigma,
                pi,
                n,
                m,
                g,
                energy,
                ed,
            });
        }
    }

    let mut sink = open_sink(cfg.out())?;
    match cfg.format()? {
        Format::Csv => {
            let mut text = prov.csv_header();
            text.push_str(if with_ed {
                "sigma,pi,n,m,g,energy,ed,rel_err\n"
            } else {
                "sigma,pi,n,m,g,energy\n"
            });
            for row in &rows {
                text.push_str(&format!(
                    "{:+},{:+},{},{},{},{}",
                    row.sigma,
                    row.pi,
                    row.n,
                    row.m,
                    fmt_csv(row.g),
                    fmt_csv(row.energy)
                ));
                if let Some((ed, rel)) = row.ed {
                    text.push_str(&format!(",{},{}", fmt_csv(ed), fmt_csv(rel)));
                }
                text.push('\n');
            }
            write_all(sink.as_mut(), &text)?;
        }
        Format::Json => {
            let rendered = json_array(rows.iter().map(|row| {
                let mut item = format!(
                    "{{\"sigma\":\"{}\",\"pi\":\"{}\",\"n\":{},\"m\":{},\"g\":{},\"energy\":{}",
                    sign_text(row.sigma),
                    sign_text(row.pi),
                    row.n,
                    row.m,
                    fmt_json(row.g),
                    fmt_json(row.energy)
                );
                if let Some((ed, rel)) = row.ed {
                    item.push_str(&format!(
                        ",\"ed\":{},\"rel_err\":{}",
                        fmt_json(ed),
                        fmt_json(rel)
                    ));
                }
                item.push('}');
                item
            }));
            let text = format!("{{{},\"rows\":{rendered}}}\n", prov.json_fields());
            write_all(sink.as_mut(), &text)?;
        }
    }
    finish(sink)
}

pub fn sweep_c(args: &SweepArgs, cfg: &Settings) -> Result<(), Failure> {
    let sector = cfg.sector(&args.sigma, &args.pi)?;
    let g = cfg.f64_value(&args.g, "g", 1e4)?;
    let c_min = cfg.f64_value(&args.c_min, "c-min", 0.02)?;
    let c_max = cfg.f64_value(&args.c_max, "c-max", 0.5)?;
    let steps = cfg.usize_value(&args.steps, "steps", 25)?;
    let k = cfg.usize_value(&args.k, "k", 8)?;
    let nmax = cfg.nmax()?;
    let tol = cfg.tol()?;
    if steps == 0 {
        return Err(Failure::invalid("steps must be at least 1".to_string()));
    }
    if !(0.0..=1.0).contains(&c_min) || !(0.0..=1.0).contains(&c_max) || c_min > c_max {
        return Err(Failure::invalid(format!(
            "displacement grid must satisfy 0 <= c-min <= c-max <= 1, got [{c_min}, {c_max}]"
        )));
    }

    // A level passes as an outside level when it matches the analytic wedge
    // energies this closely; as a strip level when this much of its weight
    // sits between the lines.
    const OUT_WINDOW: f64 = 0.02;
    const IN_WEIGHT: f64 = 0.99;
    const WEIGHT_RESOLUTION: usize = 101;

    struct Row {
        c: f64,
        level: usize,
        energy: f64,
        origin: &'static str,
        degeneracy: usize,
    }

    let basis = enumerate_basis(sector, nmax)?;
    let mut rows = Vec::new();
    for step in 0..steps {
        let c = if steps == 1 {
            c_min
        } else {
            c_min + (c_max - c_min) * step as f64 / (steps - 1) as f64
        };
        let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
        let solution = lowest_eigenpairs(&h, k, tol)?;
        let top = solution.eigenvalues[k - 1];
        let outside: Vec<f64> = outside_spectrum(c, top * (1.0 + 2.0 * OUT_WINDOW) + 1.0)?
            .into_iter()
            .filter(|level| level.bosonic == sector || level.fermionic == sector)
            .map(|level| level.energy())
            .collect();
        for i in 0..k {
            let energy = solution.eigenvalues[i];
            let (p_in, _) = region_weights(
                solution.eigenvectors[i].as_slice(),
                &basis,
                c,
                WEIGHT_RESOLUTION,
            )?;
            let origin = if p_in > IN_WEIGHT {
                "in"
            } else if outside.iter().any(|&o| (energy - o).abs() <= OUT_WINDOW * o) {
                "out"
            } else {
                "mixed"
            };
            let degeneracy = solution
                .eigenvalues
                .iter()
                .filter(|&&e| (e - energy).abs() <= 1e-6 * (1.0 + energy.abs()))
                .count();
            rows.push(Row {
                c,
                level: i,
                energy,
                origin,
                degeneracy,
            });
        }
    }

    // The crossing displacement where the lowest strip level overtakes the
    // lowest outside level, when the sweep range brackets it.
    let c_dagger = if steps > 1 && c_max < 1.0 {
        match exclusion_boundary(sector, g, nmax, c_min, c_max, (c_max - c_min) / 256.0, tol) {
            Ok(value) => Some(value),
            Err(deltabox::Error::Numeric(_)) => None,
            Err(err) => return Err(err.into()),
        }
    } else {
        None
    };

    let mut prov = Provenance::new("sweep-c");
    prov.text("sigma", sign_text(sector.sigma()))
        .text("pi", sign_text(sector.pi()))
        .float("g", g)
        .float("c-min", c_min)
        .float("c-max", c_max)
        .int("steps", steps as i64)
        .int("k", k as i64)
        .int("nmax", i64::from(nmax))
        .float("tol", tol)
        .int("basis_size", basis.len() as i64);

    let mut sink = open_sink(cfg.out())?;
    match cfg.format()? {
        Format::Csv => {
            let mut text = prov.csv_header();
            text.push_str(&match c_dagger {
                Some(value) => format!("# c_dagger {}\n", fmt_csv(value)),
                None => "# c_dagger none\n".to_string(),
            });
            text.push_str("c,level_index,energy,origin,sigma,pi,degeneracy\n");
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{:+},{:+},{}\n",
                    fmt_csv(row.c),
                    row.level,
                    fmt_csv(row.energy),
                    row.origin,
                    sector.sigma(),
                    sector.pi(),
                    row.degeneracy
                ));
            }
            write_all(sink.as_mut(), &text)?;
        }
        Format::Json => {
            let rendered = json_array(rows.iter().map(|row| {
                format!(
                    "{{\"c\":{},\"level_index\":{},\"energy\":{},\"origin\":\"{}\",\
                     \"sigma\":\"{}\",\"pi\":\"{}\",\"degeneracy\":{}}}",
                    fmt_json(row.c),
                    row.level,
                    fmt_json(row.energy),
                    row.origin,
                    sign_text(sector.sigma()),
                    sign_text(sector.pi()),
                    row.degeneracy
                )
            }));
            let dagger = match c_dagger {
                Some(value) => fmt_json(value),
                None => "null".to_string(),
            };
            let text = format!(
                "{{{},\"c_dagger\":{dagger},\"rows\":{rendered}}}\n",
                prov.json_fields()
            );
            write_all(sink.as_mut(), &text)?;
        }
    }
    finish(sink)
}

pub fn dark(args: &DarkArgs, cfg: &Settings) -> Result<(), Failure> {
    let q_max = cfg.u32_value(&args.q_max, "q-max", 3)?;
    let e_max_pi2 = cfg.f64_value(&args.e_max, "e-max", 50.0)?;
    let e_max = PI * PI * e_max_pi2;
    let nmax = cfg.nmax()?;

    let mut prov = Provenance::new("dark");
    let states: Vec<DarkState> = match cfg.fraction(&args.c)? {
        Some(fraction) => {
            prov.text("c", fraction.to_string());
            let catalog = enumerate_dark_states(fraction, e_max)?;
            match &args.tower {
                Some(text) => {
                    let j_max: u32 = text.parse().map_err(|_| {
                        Failure::invalid(format!("tower must be a positive integer, got {text}"))
                    })?;
                    prov.int("tower", i64::from(j_max));
                    let primitive = catalog.iter().find(|s| s.j == 1).ok_or_else(|| {
                        Failure::numeric(format!(
                            "no primitive blind state below {e_max_pi2} pi^2 at c = {fraction}"
                        ))
                    })?;
                    tower(primitive, j_max)?
                }
                None => catalog,
            }
        }
        None => {
            if args.tower.is_some() {
                return Err(Failure::invalid(
                    "--tower needs --c to select a displacement".to_string(),
                ));
            }
            prov.int("q-max", i64::from(q_max));
            dark_distribution(q_max, e_max)?
                .into_values()
                .flatten()
                .collect()
        }
    };
    prov.float("e-max", e_max_pi2);
    if args.verify {
        prov.int("nmax", i64::from(nmax));
    }

    let mut residuals = Vec::new();
    if args.verify {
        for state in &states {
            residuals.push(verify_dark(
                state.c,
                state.box_n,
                state.box_m,
                state.sector,
                nmax,
            )?);
        }
    }

    let mut sink = open_sink(cfg.out())?;
    match cfg.format()? {
        Format::Csv => {
            let mut text = prov.csv_header();
            text.push_str(if args.verify {
                "p,q,n,m,j,N,M,energy_over_pi2,sigma,pi,residual\n"
            } else {
                "p,q,n,m,j,N,M,energy_over_pi2,sigma,pi\n"
            });
            for (i, s) in states.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{:+},{:+}",
                    s.c.numerator(),
                    s.c.denominator(),
                    s.n,
                    s.m,
                    s.j,
                    s.box_n,
                    s.box_m,
                    s.norm2(),
                    s.sector.sigma(),
                    s.sector.pi()
                ));
                if args.verify {
                    text.push(',');
                    text.push_str(&fmt_csv(residuals[i]));
                }
                text.push('\n');
            }
            write_all(sink.as_mut(), &text)?;
        }
        Format::Json => {
            let rendered = json_array(states.iter().enumerate().map(|(i, s)| {
                let mut item = format!(
                    "{{\"p\":{},\"q\":{},\"n\":{},\"m\":{},\"j\":{},\"N\":{},\"M\":{},\
                     \"energy_over_pi2\":{},\"sigma\":\"{}\",\"pi\":\"{}\"",
                    s.c.numerator(),
                    s.c.denominator(),
                    s.n,
                    s.m,
                    s.j,
                    s.box_n,
                    s.box_m,
                    s.norm2(),
                    sign_text(s.sector.sigma()),
                    sign_text(s.sector.pi())
                );
                if args.verify {
                    item.push_str(&format!(",\"residual\":{}", fmt_json(residuals[i])));
                }
                item.push('}');
                item
            }));
            let text = format!("{{{},\"rows\":{rendered}}}\n", prov.json_fields());
            write_all(sink.as_mut(), &text)?;
        }
    }
    finish(sink)
}

pub fn wavefunction(args: &WavefunctionArgs, cfg: &Settings) -> Result<(), Failure> {
    let sector = cfg.sector(&args.sigma, &args.pi)?;
    let g = cfg.f64_value(&args.g, "g", 1.0)?;
    let c = cfg.displacement(&args.c, 0.0)?;
    let level = cfg.usize_value(&args.level, "level", 0)?;
    let resolution = cfg.usize_value(&args.resolution, "resolution", 201)?;
    let nmax = cfg.nmax()?;
    let tol = cfg.tol()?;

    let basis = enumerate_basis(sector, nmax)?;
    let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
    let solution = lowest_eigenpairs(&h, level + 1, tol)?;
    let coeffs = solution.eigenvectors[level].as_slice();
    let grid = eval_wavefunction(coeffs, &basis, resolution)?;
    let (p_in, p_out) = region_weights(coeffs, &basis, c, resolution)?;

    let mut prov = Provenance::new("wavefunction");
    prov.text("sigma", sign_text(sector.sigma()))
        .text("pi", sign_text(sector.pi()))
        .float("g", g)
        .float("c", c)
        .int("level", level as i64)
        .int("resolution", resolution as i64)
        .int("nmax", i64::from(nmax))
        .float("tol", tol)
        .int("basis_size", basis.len() as i64)
        .float("energy", solution.eigenvalues[level])
        .float("residual", solution.residuals[level])
        .float("p_in", p_in)
        .float("p_out", p_out);

    let mut sink = open_sink(cfg.out())?;
    match cfg.format()? {
        Format::Csv => {
            write_all(sink.as_mut(), &prov.csv_header())?;
            grid.write_csv(&mut sink)
                .map_err(|err| Failure::numeric(format!("write failed: {err}")))?;
        }
        Format::Json => {
            let values = json_array((0..resolution).map(|i| {
                json_array((0..resolution).map(|j| fmt_json(grid.value(i, j))))
            }));
            let text = format!(
                "{{{},\"resolution\":{resolution},\"values\":{values}}}\n",
                prov.json_fields()
            );
            write_all(sink.as_mut(), &text)?;
        }
    }
    finish(sink)
}

pub fn verify(args: &VerifyArgs, cfg: &Settings) -> Result<(), Failure> {
    let mut selected = Vec::new();
    for text in &args.only {
        let index: usize = text.parse().unwrap_or(0);
        if !(1..=9).contains(&index) {
            return Err(Failure::invalid(format!(
                "criteria are numbered 1 through 9, got {text}"
            )));
        }
        if !selected.contains(&index) {
            selected.push(index);
        }
    }
    if selected.is_empty() {
        selected = (1..=9).collect();
    }
    selected.sort_unstable();

    let mut sink = open_sink(cfg.out())?;
    let mut failed = 0usize;
    for index in selected {
        let report = match index {
            1 => validate::criterion_1(),
            2 => validate::criterion_2(),
            3 => validate::criterion_3(),
            4 => validate::criterion_4(),
            5 => validate::criterion_5(),
            6 => validate::criterion_6(),
            7 => validate::criterion_7(),
            8 => validate::criterion_8(),
            _ => validate::criterion_9(),
        }
        .map_err(|err| Failure::numeric(err.to_string()))?;
        let mut text = report.summary_line();
        text.push('\n');
        for line in &report.lines {
            text.push_str(line);
            text.push('\n');
        }
        write_all(sink.as_mut(), &text)?;
        if !report.passed {
            failed += 1;
        }
    }
    finish(sink)?;
    if failed > 0 {
        return Err(Failure::numeric(format!(
            "{failed} criterion(s) failed; details above"
        )));
    }
    Ok(())
}
