import type { TreeNode, WordTree } from './api.js';
import { fontSizeFor } from './scale.js';

export interface WordTreeCallbacks {
  onDirectionChange?: (direction: 'following' | 'preceding') => void;
}

/**
 * Context word tree with homophone hints. The payload is fully recursive,
 * so re-rooting on a child is a pure client-side descent (one level per
 * click, breadcrumb to climb back); no refetch and no recount.
 */
export class WordTreeView {
  private payload: WordTree | null = null;
  private path: string[] = [];

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: WordTreeCallbacks = {},
  ) {
    this.container.classList.add('wordtree');
  }

  render(payload: WordTree): void {
    this.payload = payload;
    this.path = [];
    this.paint();
  }

  renderEmpty(keyword: string): void {
    this.payload = null;
    this.path = [];
    this.container.textContent = '';
    const empty = document.createElement('div');
    empty.className = 'tree-empty';
    empty.textContent = keyword
      ? `"${keyword}" does not occur in this transcript.`
      : 'Search a word to see its contexts.';
    this.container.appendChild(empty);
  }

  private currentRoot(): TreeNode {
    let node = this.payload!.tree;
    for (const word of this.path) {
      node = node.children.find((c) => c.word === word)!;
    }
    return node;
  }

  private paint(): void {
    const payload = this.payload;
    if (!payload) return;
    this.container.textContent = '';

    const header = document.createElement('div');
    header.className = 'tree-header';
    const confidence = document.createElement('span');
    confidence.className = 'tree-confidence';
    confidence.textContent =
      `"${payload.keyword}" · avg confidence ${payload.keyword_confidence.toFixed(2)} · ` +
      `${payload.direction}`;
    header.appendChild(confidence);

    const flip = document.createElement('button');
    flip.className = 'tree-flip';
    flip.textContent = payload.direction === 'following' ? 'show preceding' : 'show following';
    flip.addEventListener('click', () =>
      this.callbacks.onDirectionChange?.(
        payload.direction === 'following' ? 'preceding' : 'following',
      ),
    );
    header.appendChild(flip);

    if (this.path.length > 0) {
      const up = document.createElement('button');
      up.className = 'tree-up';
      up.textContent = `back to ${this.path.length > 1 ? this.path[this.path.length - 2] : payload.keyword}`;
      up.addEventListener('click', () => {
        this.path.pop();
        this.paint();
      });
      header.appendChild(up);
    }
    this.container.appendChild(header);

    const body = document.createElement('div');
    body.className = `tree-body ${payload.direction}`;
    body.appendChild(this.nodeElement(this.currentRoot(), payload.tree.count, true));
    this.container.appendChild(body);

    const homophones = document.createElement('div');
    homophones.className = 'homophones';
    homophones.textContent = payload.homophones.length
      ? `sounds like: ${payload.homophones.join(', ')}`
      : 'no homophones on record';
    this.container.appendChild(homophones);
  }

  private nodeElement(node: TreeNode, rootCount: number, isRoot: boolean): HTMLElement {
    const wrapper = document.createElement('div');
    wrapper.className = 'tree-node';

    const word = document.createElement('span');
    word.className = isRoot ? 'tree-word tree-root' : 'tree-word';
    word.textContent = `${node.word} (${node.count})`;
    word.style.fontSize = `${fontSizeFor(node.count, rootCount)}px`;
    if (!isRoot) {
      word.addEventListener('click', () => {
        this.path.push(node.word);
        this.paint();
      });
    }
    wrapper.appendChild(word);

    if (node.children.length > 0) {
      const children = document.createElement('div');
      children.className = 'tree-children';
      for (const child of node.children) {
        children.appendChild(this.nodeElement(child, rootCount, false));
      }
      wrapper.appendChild(children);
    }
    return wrapper;
  }
}
