import type { Store } from './state.js';

// Thin wrapper over the native audio element. Playback position flows one
// way: element -> store -> views.

export class Player {
  constructor(
    private readonly audio: HTMLAudioElement,
    private readonly store: Store,
  ) {
    audio.addEventListener('timeupdate', () => {
      this.store.setPlaybackPosition(audio.currentTime);
    });
  }

  load(url: string): void {
    this.audio.src = url;
  }

  seek(seconds: number): void {
    this.audio.currentTime = seconds;
    // jsdom and some browsers do not fire timeupdate on programmatic seeks
    this.store.setPlaybackPosition(seconds);
  }

  get position(): number {
    return this.audio.currentTime;
  }
}
