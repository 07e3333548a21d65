// SPDX-License-Identifier: Apache-2.0
//! `imply-cim`: keystreams, file encryption, LSB steganography and shift-plan
//! dumps on the simulated IMPLY array.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use imply_cim::cost::CostReport;
use imply_cim::engine::CsvTrace;
use imply_cim::hexio::{bits_to_bytes, bits_to_hex, bytes_to_bits, parse_material, BitOrder};
use imply_cim::schedule::{count_row, plan_conventional, plan_proposed, RegisterLayout, Scheduler};
use imply_cim::stego::{embed_lsb, extract_lsb, histogram, histogram_csv, psnr, GrayImage};
use imply_cim::{grain, simulate_keystream, simulate_keystream_traced, trivium, Cipher, ShiftMode};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "imply-cim", version, about = "Stream ciphers on a simulated IMPLY memristor row")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print `n` keystream bits as hex.
    Keystream {
        #[command(flatten)]
        cipher: CipherArgs,
        /// Number of keystream bits.
        #[arg(short = 'n')]
        n: usize,
        /// Write the hex here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// XOR a file with the keystream. Running it twice restores the input.
    Crypt {
        #[command(flatten)]
        cipher: CipherArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Hide or recover an encrypted message in a binary PGM.
    Stego {
        #[command(subcommand)]
        action: StegoAction,
    },
    /// Dump a shift plan as CSV and print per-cycle element counts.
    Plan {
        #[arg(long, default_value = "trivium")]
        cipher: Cipher,
        #[arg(long, default_value = "proposed")]
        mode: ShiftMode,
        /// Register name (A, B, C, LFSR, NFSR) or label prefix; all when omitted.
        #[arg(long)]
        register: Option<String>,
        /// Cycles to plan; defaults to the warm-up length.
        #[arg(short = 'n')]
        n: Option<usize>,
        /// Write the transfer-level plan CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StegoAction {
    /// Encrypt a message and embed it in a cover image; prints the PSNR.
    Embed {
        #[command(flatten)]
        cipher: CipherArgs,
        #[arg(long)]
        cover: PathBuf,
        /// Message file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Stego image to write.
        #[arg(long)]
        stego: PathBuf,
        /// Histogram CSV of the stego image.
        #[arg(long)]
        histogram: Option<PathBuf>,
        /// Histogram CSV of the cover image.
        #[arg(long)]
        cover_histogram: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Extract and decrypt a message from a stego image.
    Extract {
        #[command(flatten)]
        cipher: CipherArgs,
        #[arg(long)]
        stego: PathBuf,
        /// Recovered message.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CipherArgs {
    #[arg(long, default_value = "trivium")]
    cipher: Cipher,
    #[arg(long, default_value = "proposed")]
    mode: ShiftMode,
    /// Key as hex: 20 digits for Trivium, 32 for Grain-128a.
    #[arg(long)]
    key: String,
    /// IV as hex: 20 digits for Trivium, 24 for Grain-128a.
    #[arg(long)]
    iv: String,
}

#[derive(Args)]
struct ReportArgs {
    /// Write every micro-op as `step_index,kind,p,q,resulting_bit`.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print a cost report.
    #[arg(long, value_enum)]
    report: Option<ReportFormat>,
    /// Write the report here instead of stderr.
    #[arg(long, requires = "report")]
    report_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

struct Material {
    cipher: Cipher,
    mode: ShiftMode,
    key: Vec<bool>,
    iv: Vec<bool>,
}

impl CipherArgs {
    fn parse(&self) -> Result<Material> {
        let c = self.cipher;
        let key = parse_material(&self.key, c.key_bits(), c.bit_order(), "key")?;
        let iv = parse_material(&self.iv, c.iv_bits(), c.bit_order(), "iv")?;
        Ok(Material { cipher: c, mode: self.mode, key, iv })
    }
}

fn keystream(m: &Material, n: usize, r: Option<&ReportArgs>) -> Result<Vec<bool>> {
    let trace = r.and_then(|r| r.trace.as_ref());
    let (bits, report) = match trace {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let sink = Box::new(CsvTrace::new(BufWriter::new(file)));
            let (bits, report, mut back) =
                simulate_keystream_traced(m.cipher, &m.key, &m.iv, n, m.mode, sink)?;
            back.flush().with_context(|| format!("writing {}", path.display()))?;
            (bits, report)
        }
        None => simulate_keystream(m.cipher, &m.key, &m.iv, n, m.mode)?,
    };
    if let Some(r) = r {
        emit_report(&report, r)?;
    }
    Ok(bits)
}

fn emit_report(report: &CostReport, r: &ReportArgs) -> Result<()> {
    let Some(fmt) = r.report else { return Ok(()) };
    let mut text = match fmt {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Table => report.to_table(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &r.report_out {
        Some(p) => write(p, text.as_bytes()),
        None => {
            io::stderr().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read(p: &Path) -> Result<Vec<u8>> {
    fs::read(p).with_context(|| format!("reading {}", p.display()))
}

fn write(p: &Path, data: &[u8]) -> Result<()> {
    fs::write(p, data).with_context(|| format!("writing {}", p.display()))
}

fn xor_with(data: &[u8], ks: &[bool], order: BitOrder) -> Vec<u8> {
    data.iter().zip(bits_to_bytes(ks, order)).map(|(d, k)| d ^ k).collect()
}

fn layouts(c: Cipher) -> Vec<RegisterLayout> {
    match c {
        Cipher::Trivium => vec![trivium::layout_a(), trivium::layout_b(), trivium::layout_c()],
        Cipher::Grain128a => vec![grain::layout_lfsr(), grain::layout_nfsr()],
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Keystream { cipher, n, out, report } => {
            let m = cipher.parse()?;
            let bits = keystream(&m, n, Some(&report))?;
            let line = format!("{}\n", bits_to_hex(&bits, m.cipher.bit_order()));
            match out {
                Some(p) => write(&p, line.as_bytes())?,
                None => io::stdout().write_all(line.as_bytes())?,
            }
        }
        Command::Crypt { cipher, input, out, report } => {
            let m = cipher.parse()?;
            let data = read(&input)?;
            let ks = keystream(&m, data.len() * 8, Some(&report))?;
            write(&out, &xor_with(&data, &ks, m.cipher.bit_order()))?;
        }
        Command::Stego { action } => stego(action)?,
        Command::Plan { cipher, mode, register, n, out } => plan(cipher, mode, register, n, out)?,
    }
    Ok(())
}

fn stego(action: StegoAction) -> Result<()> {
    match action {
        StegoAction::Embed { cipher, cover, input, stego, histogram: hist, cover_histogram, report } => {
            let m = cipher.parse()?;
            let cover_img = GrayImage::from_pgm(&read(&cover)?)
                .with_context(|| format!("reading {}", cover.display()))?;
            let msg = read(&input)?;
            let nbits = msg.len() * 8;
            if nbits > cover_img.capacity() {
                bail!(
                    "message of {} bytes needs {nbits} bits; the cover holds {} after the header",
                    msg.len(),
                    cover_img.capacity()
                );
            }
            let ks = keystream(&m, nbits, Some(&report))?;
            let ct = xor_with(&msg, &ks, m.cipher.bit_order());
            let st = embed_lsb(&cover_img, &bytes_to_bits(&ct, BitOrder::MsbFirst))?;
            write(&stego, &st.to_pgm())?;
            if let Some(p) = hist {
                write(&p, histogram_csv(&histogram(&st)).as_bytes())?;
            }
            if let Some(p) = cover_histogram {
                write(&p, histogram_csv(&histogram(&cover_img)).as_bytes())?;
            }
            let db = psnr(&cover_img, &st)?;
            println!("embedded {nbits} bits of {} available", cover_img.capacity());
            println!("PSNR: {db:.3} dB");
        }
        StegoAction::Extract { cipher, stego, out } => {
            let m = cipher.parse()?;
            let img = GrayImage::from_pgm(&read(&stego)?)
                .with_context(|| format!("reading {}", stego.display()))?;
            let bits = extract_lsb(&img)?;
            if bits.len() % 8 != 0 {
                bail!("payload of {} bits is not whole bytes", bits.len());
            }
            let ct = bits_to_bytes(&bits, BitOrder::MsbFirst);
            let ks = keystream(&m, bits.len(), None)?;
            write(&out, &xor_with(&ct, &ks, m.cipher.bit_order()))?;
        }
    }
    Ok(())
}

fn plan(
    cipher: Cipher,
    mode: ShiftMode,
    register: Option<String>,
    n: Option<usize>,
    out: Option<PathBuf>,
) -> Result<()> {
    let all = layouts(cipher);
    let chosen: Vec<RegisterLayout> = match &register {
        None => all,
        Some(r) => {
            let by_name: Vec<_> = all.iter().filter(|l| l.name.eq_ignore_ascii_case(r)).cloned().collect();
            if by_name.is_empty() {
                all.into_iter().filter(|l| l.prefix == *r).collect()
            } else {
                by_name
            }
        }
    };
    if chosen.is_empty() {
        let names: Vec<String> = layouts(cipher).into_iter().map(|l| l.name).collect();
        bail!("{cipher} has no register `{}`; try one of {names:?}", register.unwrap_or_default());
    }
    let cycles = n.unwrap_or(cipher.warmup_cycles() as usize);

    let mut csv = Vec::new();
    let stdout = io::stdout();
    let mut so = stdout.lock();
    writeln!(so, "register,cycle,buffers,inverters")?;
    for (i, layout) in chosen.iter().enumerate() {
        let plan = match mode {
            ShiftMode::Conventional => plan_conventional(layout, cycles),
            ShiftMode::Proposed => plan_proposed(layout, cycles)?,
        };
        for t in 1..=cycles {
            let c = count_row(plan.cycle(t));
            writeln!(so, "{},{t},{},{}", layout.name, c.buffers, c.inverters)?;
        }
        let steady = Scheduler::new(layout.clone(), mode);
        let c = count_row(steady.row(layout.steady_cycle()));
        writeln!(so, "{},steady,{},{}", layout.name, c.buffers, c.inverters)?;
        if out.is_some() {
            let mut buf = Vec::new();
            plan.write_csv(&mut buf)?;
            let skip = if i == 0 { 0 } else { buf.iter().position(|&b| b == b'\n').map_or(0, |p| p + 1) };
            csv.extend_from_slice(&buf[skip..]);
        }
    }
    if let Some(p) = out {
        write(&p, &csv)?;
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
