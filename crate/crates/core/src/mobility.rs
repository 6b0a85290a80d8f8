//! Random-waypoint user motion with hotspot work schedules, plus the
//! per-slot activity draw.
//!
//! Every user walks in a straight line towards a destination at a fixed
//! per-slot speed and picks a new destination on arrival. Hotspot users
//! additionally own a pico cell and a work start slot: when work begins
//! they head for a random point in their pico, wander slowly inside it
//! while at work, and leave for a random point in the macro cell when work
//! ends. Uniform users never get a pico or a schedule.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{uniform_in_disc, Point2D, Topology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobilityError {
    #[error("hotspot users need at least one pico cell to work in")]
    NoPicosForHotspot,
    #[error("work schedule has no start slots")]
    EmptySchedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserKind {
    Uniform,
    Hotspot,
}

/// Where hotspot users are when the run starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HotspotStart {
    /// Scattered over the macro cell like everyone else.
    #[default]
    Scattered,
    /// Already inside their pico; used by single-slot snapshots.
    AtWork,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilityParams {
    /// Speed range in m/slot while travelling.
    pub travel_speed: [f64; 2],
    /// Speed range in m/slot while wandering inside the pico at work.
    pub work_speed: [f64; 2],
    pub work_starts: Vec<u64>,
    pub work_duration: u64,
    pub hotspot_start: HotspotStart,
}

impl Default for MobilityParams {
    fn default() -> Self {
        Self {
            travel_speed: [10.0, 20.0],
            work_speed: [0.0, 2.0],
            work_starts: vec![0, 42, 83],
            work_duration: 375,
            hotspot_start: HotspotStart::Scattered,
        }
    }
}

impl MobilityParams {
    pub fn validate(&self) -> Result<(), String> {
        for (key, [lo, hi]) in [("travel_speed", self.travel_speed), ("work_speed", self.work_speed)] {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return Err(format!("{key} must be an ordered pair of non-negative speeds"));
            }
        }
        if self.work_starts.is_empty() {
            return Err("work_starts must not be empty".into());
        }
        if self.work_starts.windows(2).any(|w| w[0] >= w[1]) {
            return Err("work_starts must be strictly increasing".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActivityParams {
    pub uniform_prob: f64,
    /// Applies to hotspot users standing inside their own pico footprint.
    pub hotspot_prob: f64,
}

impl Default for ActivityParams {
    fn default() -> Self {
        Self {
            uniform_prob: 0.4,
            hotspot_prob: 0.8,
        }
    }
}

impl ActivityParams {
    pub fn validate(&self) -> Result<(), String> {
        for (key, p) in [("uniform_prob", self.uniform_prob), ("hotspot_prob", self.hotspot_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{key} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
}

impl Velocity {
    pub fn magnitude(&self) -> f64 {
        self.vx.hypot(self.vy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserState {
    pub id: usize,
    pub kind: UserKind,
    pub pos: Point2D,
    pub dest: Point2D,
    /// m/slot
    pub speed: f64,
    pub velocity: Velocity,
    pub my_pico: Option<usize>,
    pub work_start: Option<u64>,
    pub work_len: u64,
    pub active: bool,
}

impl UserState {
    pub fn is_working(&self, slot: u64) -> bool {
        matches!(self.work_start, Some(start) if slot >= start && slot < start + self.work_len)
    }

    /// Sets a new destination and speed and projects the speed onto the
    /// direction of travel.
    pub fn retarget(&mut self, dest: Point2D, speed: f64) {
        self.dest = dest;
        self.speed = speed;
        let dx = dest.x - self.pos.x;
        let dy = dest.y - self.pos.y;
        let norm = dx.hypot(dy);
        self.velocity = if norm > 0.0 {
            Velocity {
                vx: speed * dx / norm,
                vy: speed * dy / norm,
            }
        } else {
            Velocity::default()
        };
    }
}

fn speed_in<R: Rng + ?Sized>(range: [f64; 2], rng: &mut R) -> f64 {
    if range[0] == range[1] {
        range[0]
    } else {
        rng.random_range(range[0]..range[1])
    }
}

pub fn init_user<R: Rng + ?Sized>(
    id: usize,
    kind: UserKind,
    topology: &Topology,
    params: &MobilityParams,
    rng: &mut R,
) -> Result<UserState, MobilityError> {
    let macro_cell = topology.macro_cell;
    let (my_pico, work_start) = match kind {
        UserKind::Uniform => (None, None),
        UserKind::Hotspot => {
            if topology.picos.is_empty() {
                return Err(MobilityError::NoPicosForHotspot);
            }
            if params.work_starts.is_empty() {
                return Err(MobilityError::EmptySchedule);
            }
            let pico = rng.random_range(0..topology.picos.len());
            let start = params.work_starts[rng.random_range(0..params.work_starts.len())];
            (Some(pico), Some(start))
        }
    };
    let at_work = kind == UserKind::Hotspot && params.hotspot_start == HotspotStart::AtWork;
    let (area_center, area_radius, speed_range) = match my_pico {
        Some(p) if at_work => {
            let cell = topology.picos[p];
            (cell.center, cell.radius, params.work_speed)
        }
        _ => (macro_cell.center, macro_cell.radius, params.travel_speed),
    };
    let pos = uniform_in_disc(area_center, area_radius, rng);
    let dest = uniform_in_disc(area_center, area_radius, rng);
    let speed = speed_in(speed_range, rng);
    let mut user = UserState {
        id,
        kind,
        pos,
        dest,
        speed: 0.0,
        velocity: Velocity::default(),
        my_pico,
        work_start,
        work_len: params.work_duration,
        active: false,
    };
    user.retarget(dest, speed);
    Ok(user)
}

/// Advances one slot: work-start and work-end retargeting, the straight
/// line move, then arrival handling. A user is considered arrived when the
/// remaining distance is within one step; it then snaps onto the
/// destination.
pub fn step_user<R: Rng + ?Sized>(
    user: &mut UserState,
    slot: u64,
    topology: &Topology,
    params: &MobilityParams,
    rng: &mut R,
) {
    let macro_cell = topology.macro_cell;
    let pico = user.my_pico.and_then(|p| topology.pico(p)).copied();

    if let (Some(start), Some(cell)) = (user.work_start, pico) {
        if slot == start {
            let dest = uniform_in_disc(cell.center, cell.radius, rng);
            let speed = speed_in(params.travel_speed, rng);
            user.retarget(dest, speed);
        }
        if slot == start + user.work_len {
            let dest = uniform_in_disc(macro_cell.center, macro_cell.radius, rng);
            let speed = speed_in(params.travel_speed, rng);
            user.retarget(dest, speed);
        }
    }

    if user.pos.distance(&user.dest) <= user.speed {
        user.pos = user.dest;
        match pico {
            Some(cell) if user.is_working(slot) => {
                let dest = uniform_in_disc(cell.center, cell.radius, rng);
                let speed = speed_in(params.work_speed, rng);
                user.retarget(dest, speed);
            }
            _ => {
                let dest = uniform_in_disc(macro_cell.center, macro_cell.radius, rng);
                let speed = speed_in(params.travel_speed, rng);
                user.retarget(dest, speed);
            }
        }
    } else {
        user.pos.x += user.velocity.vx;
        user.pos.y += user.velocity.vy;
    }
}

/// Bernoulli activity draw for the coming slot. Always consumes exactly one
/// uniform variate so that matched runs stay aligned.
pub fn draw_activity<R: Rng + ?Sized>(
    user: &UserState,
    inside_own_pico: bool,
    params: &ActivityParams,
    rng: &mut R,
) -> bool {
    let p = if user.kind == UserKind::Hotspot && inside_own_pico {
        params.hotspot_prob
    } else {
        params.uniform_prob
    };
    let u: f64 = rng.random();
    u < p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_coe, build_monet, build_udc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn uniform_users_have_no_schedule() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let u = init_user(0, UserKind::Uniform, &t, &MobilityParams::default(), &mut rng(1)).unwrap();
        assert_eq!(u.my_pico, None);
        assert_eq!(u.work_start, None);
        assert!(!u.active);
        assert!((10.0..20.0).contains(&u.speed));
        assert!((u.velocity.magnitude() - u.speed).abs() < 1e-9);
    }

    #[test]
    fn hotspot_init_is_deterministic() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let p = MobilityParams::default();
        let a = init_user(4, UserKind::Hotspot, &t, &p, &mut rng(77)).unwrap();
        let b = init_user(4, UserKind::Hotspot, &t, &p, &mut rng(77)).unwrap();
        assert_eq!(a, b);
        assert!([0, 42, 83].contains(&a.work_start.unwrap()));
        assert!(a.my_pico.unwrap() < 28);
    }

    #[test]
    fn hotspot_needs_picos() {
        let t = build_monet(500.0).unwrap();
        assert_eq!(
            init_user(0, UserKind::Hotspot, &t, &MobilityParams::default(), &mut rng(1)),
            Err(MobilityError::NoPicosForHotspot)
        );
    }

    #[test]
    fn initial_positions_inside_macro() {
        let t = build_monet(500.0).unwrap();
        let p = MobilityParams::default();
        let mut r = rng(5);
        for id in 0..100_000 {
            let u = init_user(id, UserKind::Uniform, &t, &p, &mut r).unwrap();
            assert!(u.pos.distance(&t.macro_cell.center) <= 500.0);
            assert!(u.dest.distance(&t.macro_cell.center) <= 500.0);
        }
    }

    #[test]
    fn at_work_start_places_users_in_their_pico() {
        let t = build_udc(500.0, 50.0, 28, &mut rng(2)).unwrap();
        let p = MobilityParams {
            hotspot_start: HotspotStart::AtWork,
            ..MobilityParams::default()
        };
        let mut r = rng(3);
        for id in 0..1000 {
            let u = init_user(id, UserKind::Hotspot, &t, &p, &mut r).unwrap();
            let cell = t.picos[u.my_pico.unwrap()];
            assert!(cell.contains(&u.pos));
            assert!(u.speed <= 2.0);
        }
    }

    #[test]
    fn mid_journey_moves_by_velocity() {
        let t = build_monet(500.0).unwrap();
        let p = MobilityParams::default();
        let mut u = init_user(0, UserKind::Uniform, &t, &p, &mut rng(8)).unwrap();
        u.pos = Point2D::new(100.0, 500.0);
        u.retarget(Point2D::new(900.0, 500.0), 15.0);
        let before = u.pos;
        step_user(&mut u, 10, &t, &p, &mut rng(9));
        assert_eq!(u.pos.x, before.x + u.velocity.vx);
        assert_eq!(u.pos.y, before.y + u.velocity.vy);
        assert_eq!(u.dest, Point2D::new(900.0, 500.0));
    }

    #[test]
    fn arrival_at_work_picks_slow_destination_in_pico() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let p = MobilityParams::default();
        let mut r = rng(10);
        let mut u = init_user(0, UserKind::Hotspot, &t, &p, &mut r).unwrap();
        u.work_start = Some(0);
        let cell = t.picos[u.my_pico.unwrap()];
        u.pos = cell.center;
        u.retarget(cell.center, 1.0);
        step_user(&mut u, 5, &t, &p, &mut r);
        assert!(cell.contains(&u.dest));
        assert!(u.speed <= 2.0);
    }

    #[test]
    fn stationary_user_outside_work_retargets_fast() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let p = MobilityParams::default();
        let mut r = rng(12);
        let mut u = init_user(0, UserKind::Uniform, &t, &p, &mut r).unwrap();
        let here = u.pos;
        u.retarget(here, 0.0);
        step_user(&mut u, 3, &t, &p, &mut r);
        assert!((10.0..20.0).contains(&u.speed));
        assert_eq!(u.pos, here);
    }

    #[test]
    fn work_start_and_end_retarget() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let p = MobilityParams::default();
        let mut r = rng(13);
        let mut u = init_user(0, UserKind::Hotspot, &t, &p, &mut r).unwrap();
        u.work_start = Some(42);
        let cell = t.picos[u.my_pico.unwrap()];
        // far from destination so the arrival branch does not fire
        u.pos = t.macro_cell.center;
        u.retarget(Point2D::new(10.0, 500.0), 1.0);
        step_user(&mut u, 42, &t, &p, &mut r);
        assert!(cell.contains(&u.dest));
        assert!(u.speed >= 10.0);
        u.pos = t.macro_cell.center;
        u.retarget(cell.center, 1.0);
        step_user(&mut u, 42 + 375, &t, &p, &mut r);
        assert!(u.speed >= 10.0);
        assert!(!u.is_working(42 + 375));
        assert!(u.is_working(42 + 374));
    }

    #[test]
    fn activity_rates() {
        let t = build_coe(500.0, 50.0, 28).unwrap();
        let p = MobilityParams::default();
        let a = ActivityParams::default();
        let mut r = rng(21);
        let uniform = init_user(0, UserKind::Uniform, &t, &p, &mut r).unwrap();
        let hotspot = init_user(1, UserKind::Hotspot, &t, &p, &mut r).unwrap();
        let n = 1_000_000;
        let uniform_rate = (0..n).filter(|_| draw_activity(&uniform, true, &a, &mut r)).count() as f64 / n as f64;
        let hotspot_rate = (0..n).filter(|_| draw_activity(&hotspot, true, &a, &mut r)).count() as f64 / n as f64;
        let outside_rate = (0..n).filter(|_| draw_activity(&hotspot, false, &a, &mut r)).count() as f64 / n as f64;
        assert!((uniform_rate - 0.4).abs() < 0.002, "{uniform_rate}");
        assert!((hotspot_rate - 0.8).abs() < 0.002, "{hotspot_rate}");
        assert!((outside_rate - 0.4).abs() < 0.002, "{outside_rate}");

        let always = ActivityParams {
            uniform_prob: 1.0,
            hotspot_prob: 1.0,
        };
        assert!((0..10_000).all(|_| draw_activity(&uniform, false, &always, &mut r)));
    }

    #[test]
    fn schedule_validation() {
        let mut p = MobilityParams::default();
        p.validate().unwrap();
        p.work_starts = vec![5, 5];
        assert!(p.validate().is_err());
        p.work_starts = vec![];
        assert!(p.validate().is_err());
    }
}
