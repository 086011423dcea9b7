//! Lazy, memoized infinite streams.
//!
//! A [`Stream`] is a cons cell whose tail is computed at most once, on first
//! demand, and then shared. Cloning is cheap. Forcing is thread-safe: the
//! tail sits behind a [`OnceLock`], so concurrent readers agree on it.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

type Thunk<T> = Box<dyn FnOnce() -> Stream<T> + Send>;

type StepFn<T> = Arc<dyn Fn(&T, u64) -> T + Send + Sync>;

pub struct Stream<T>(Arc<Cell<T>>);

struct Cell<T> {
    head: T,
    tail: OnceLock<Stream<T>>,
    thunk: Mutex<Option<Thunk<T>>>,
}

impl<T> Clone for Stream<T> {
    fn clone(&self) -> Self {
        Stream(Arc::clone(&self.0))
    }
}

impl<T: Clone + Send + Sync + 'static> Stream<T> {
    pub fn cons(head: T, tail: impl FnOnce() -> Stream<T> + Send + 'static) -> Self {
        Stream(Arc::new(Cell {
            head,
            tail: OnceLock::new(),
            thunk: Mutex::new(Some(Box::new(tail))),
        }))
    }

    pub fn head(&self) -> &T {
        &self.0.head
    }

    pub fn tail(&self) -> &Stream<T> {
        self.0.tail.get_or_init(|| {
            let thunk = self
                .0
                .thunk
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .take()
                .expect("stream tail forced twice");
            thunk()
        })
    }

    pub fn nth(&self, n: usize) -> T {
        let mut s = self;
        for _ in 0..n {
            s = s.tail();
        }
        s.head().clone()
    }

    pub fn iter(&self) -> Iter<T> {
        Iter { next: self.clone() }
    }

    /// `seed, step(seed, 1), step(step(seed, 1), 2), …`: element `i + 1` is
    /// computed from element `i` and the index `i + 1`.
    pub fn unfold(seed: T, step: impl Fn(&T, u64) -> T + Send + Sync + 'static) -> Self {
        Self::unfold_from(seed, 0, Arc::new(step))
    }

    fn unfold_from(seed: T, index: u64, step: StepFn<T>) -> Self {
        let next_seed = seed.clone();
        Stream::cons(seed, move || {
            let next = step(&next_seed, index + 1);
            Self::unfold_from(next, index + 1, step)
        })
    }

    pub fn map<U: Clone + Send + Sync + 'static>(
        &self,
        f: impl Fn(&T) -> U + Send + Sync + 'static,
    ) -> Stream<U> {
        map_arc(self.clone(), Arc::new(f))
    }

    pub fn zip_with<U, V>(
        &self,
        other: &Stream<U>,
        f: impl Fn(&T, &U) -> V + Send + Sync + 'static,
    ) -> Stream<V>
    where
        U: Clone + Send + Sync + 'static,
        V: Clone + Send + Sync + 'static,
    {
        zip_arc(self.clone(), other.clone(), Arc::new(f))
    }
}

fn map_arc<T, U>(s: Stream<T>, f: Arc<dyn Fn(&T) -> U + Send + Sync>) -> Stream<U>
where
    T: Clone + Send + Sync + 'static,
    U: Clone + Send + Sync + 'static,
{
    Stream::cons(f(s.head()), move || map_arc(s.tail().clone(), f))
}

type ZipFn<T, U, V> = Arc<dyn Fn(&T, &U) -> V + Send + Sync>;

fn zip_arc<T, U, V>(a: Stream<T>, b: Stream<U>, f: ZipFn<T, U, V>) -> Stream<V>
where
    T: Clone + Send + Sync + 'static,
    U: Clone + Send + Sync + 'static,
    V: Clone + Send + Sync + 'static,
{
    Stream::cons(f(a.head(), b.head()), move || {
        zip_arc(a.tail().clone(), b.tail().clone(), f)
    })
}

// Long forced chains would otherwise drop recursively, one stack frame per
// cell.
impl<T> Drop for Cell<T> {
    fn drop(&mut self) {
        let mut next = self.tail.take();
        while let Some(stream) = next {
            match Arc::try_unwrap(stream.0) {
                Ok(mut cell) => next = cell.tail.take(),
                Err(_) => break,
            }
        }
    }
}

pub struct Iter<T> {
    next: Stream<T>,
}

impl<T: Clone + Send + Sync + 'static> Iterator for Iter<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let head = self.next.head().clone();
        let tail = self.next.tail().clone();
        self.next = tail;
        Some(head)
    }
}

impl<T: fmt::Debug> fmt::Debug for Stream<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        list.entry(&self.0.head);
        let mut cur = self.0.tail.get();
        while let Some(s) = cur {
            list.entry(&s.0.head);
            cur = s.0.tail.get();
        }
        list.finish_non_exhaustive()
    }
}
