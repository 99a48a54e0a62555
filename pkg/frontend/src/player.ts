/**
 * Plays a playlist's segment URIs back-to-back on one video element with no
 * user action between segments, preloading the upcoming segment on a second,
 * hidden element. Segments that fail to load are skipped, never silently:
 * every skip is reported so the UI can caption the missing gloss.
 */

export interface PlayerEvents {
  onSegmentStart?: (index: number) => void;
  onSegmentSkip?: (index: number) => void;
  onComplete?: () => void;
}

export class SequentialPlayer {
  private segments: string[] = [];
  private index = -1;
  private active = false;

  constructor(
    private readonly video: HTMLVideoElement,
    private readonly preloader: HTMLVideoElement | null = null,
    private readonly events: PlayerEvents = {},
  ) {
    video.addEventListener("ended", () => this.advance());
    video.addEventListener("error", () => this.skipCurrent());
  }

  load(segments: string[]): void {
    this.segments = [...segments];
    this.index = -1;
    this.active = this.segments.length > 0;
    if (this.active) {
      this.playAt(0);
    } else {
      this.events.onComplete?.();
    }
  }

  stop(): void {
    this.active = false;
    try {
      this.video.pause();
    } catch {
      // media pause is unavailable in non-browser test DOMs
    }
  }

  get currentIndex(): number {
    return this.index;
  }

  get isActive(): boolean {
    return this.active;
  }

  private playAt(index: number): void {
    this.index = index;
    this.video.src = this.segments[index];
    this.events.onSegmentStart?.(index);
    try {
      const pending = this.video.play();
      if (pending && typeof pending.catch === "function") {
        // autoplay rejection: playback resumes on the next pointer interaction
        pending.catch(() => undefined);
      }
    } catch {
      // non-browser test DOMs may not implement play()
    }
    this.preloadNext(index + 1);
  }

  private preloadNext(index: number): void {
    if (this.preloader && index < this.segments.length) {
      this.preloader.preload = "auto";
      this.preloader.src = this.segments[index];
    }
  }

  private advance(): void {
    if (!this.active) {
      return;
    }
    const next = this.index + 1;
    if (next >= this.segments.length) {
      this.active = false;
      this.events.onComplete?.();
      return;
    }
    this.playAt(next);
  }

  private skipCurrent(): void {
    if (!this.active || this.index < 0) {
      return;
    }
    this.events.onSegmentSkip?.(this.index);
    this.advance();
  }
}
