// End-to-end: the full UI against a live service instance loaded with the
// bundled fixture. Covers acceptance criterion A11.

import { afterAll, beforeAll, describe, expect, test } from 'vitest';

import { ApiClient } from '../src/api.js';
import { App } from '../src/main.js';
import { type Service, ingestFixture, startService } from './service.js';

let service: Service;
let transcriptId: string;

beforeAll(async () => {
  service = await startService();
  transcriptId = await ingestFixture(service.base);
});

afterAll(() => {
  service?.stop();
});

async function mountApp(): Promise<App> {
  document.body.innerHTML = '<div id="root"></div>';
  const app = new App(document.getElementById('root')!, new ApiClient(service.base));
  await app.init();
  await app.settle();
  return app;
}

describe('A11 UI end-to-end', () => {
  test('overview renders three rects with the middle one most opaque', async () => {
    await mountApp();
    const rects = [...document.querySelectorAll<HTMLElement>('.overview-rect')];
    expect(rects.length).toBe(3);
    const opacities = rects.map((r) => parseFloat(r.style.opacity));
    expect(opacities[1]).toBeGreaterThan(opacities[0]);
    expect(opacities[1]).toBeGreaterThan(opacities[2]);
  });

  test('clicking the second rect seeks the player to 5.10 s', async () => {
    const app = await mountApp();
    document.querySelectorAll<HTMLElement>('.overview-rect')[1].click();
    const audio = document.getElementById('audio') as HTMLAudioElement;
    expect(Math.abs(audio.currentTime - 5.1)).toBeLessThanOrEqual(0.1);
    expect(Math.abs(app.store.get().playbackPosition - 5.1)).toBeLessThanOrEqual(0.1);
  });

  test('searching "pandas" highlights exactly two spans in yellow', async () => {
    const app = await mountApp();
    const input = document.getElementById('search-input') as HTMLInputElement;
    input.value = 'pandas';
    document
      .getElementById('search-form')!
      .dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    await app.settle();

    const hits = [...document.querySelectorAll<HTMLElement>('.hit')];
    expect(hits.length).toBe(2);
    for (const hit of hits) {
      expect(hit.style.backgroundColor).toBe('rgb(255, 235, 59)');
      expect(hit.textContent).toBe('pandas');
    }
    expect(document.getElementById('hit-counter')!.textContent).toBe('1/2');
    // the keyword's tree arrives alongside the hits
    expect(document.querySelector('.tree-root')!.textContent).toBe('pandas (2)');
  });

  test('accepting the "panda" alternative rerenders verified and bumps the revision', async () => {
    const app = await mountApp();
    expect(document.getElementById('revision')!.textContent).toBe('rev 0');

    const word = document.querySelector<HTMLElement>('.word[data-segment="2"][data-token="0"]')!;
    expect(word.textContent).toBe('pan');
    word.click();
    await app.settle();

    const option = document.querySelector<HTMLElement>('.alternative[data-content="panda"]');
    expect(option).not.toBeNull();
    option!.click();
    await app.settle();

    const banner = document.getElementById('banner') as HTMLElement;
    expect(banner.hidden).toBe(true);

    const edited = document.querySelector<HTMLElement>('.word[data-segment="2"][data-token="0"]')!;
    expect(edited.textContent).toBe('panda');
    expect(edited.classList.contains('verified')).toBe(true);
    expect(parseFloat(edited.dataset.opacity!)).toBe(1);
    expect(edited.style.borderBottomStyle).toBe('double');
    expect(document.getElementById('revision')!.textContent).toBe('rev 1');
  });
});
